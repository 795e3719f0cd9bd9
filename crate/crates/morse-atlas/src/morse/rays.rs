use serde::{Deserialize, Serialize};

use super::search::pointwise_close;
use super::{delta_m, Metric, MorseError, MorseGauge, PathInBall};
use crate::gog::{SpaceBall, SpaceEdgeLabel, TreeBall};
use crate::graph::{EdgeId, VertexId};
use crate::group::word::{free_reduce, Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RayKind {
    /// Finitely many tree edges followed by a ray in the last vertex group.
    Finite,
    /// A finite prefix of an infinite edge path.
    InfinitePrefix,
}

/// The eventually periodic word `prefix · period^∞` in the standard generators of the
/// end vertex group. An empty period makes the tail a finite word.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TailSpec {
    pub prefix: Word,
    pub period: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinatorialRay {
    pub kind: RayKind,
    /// Tree-ball edges of a geodesic path from the root.
    pub edges: Vec<EdgeId>,
    pub tail: Option<TailSpec>,
}

impl CombinatorialRay {
    pub fn finite(edges: Vec<EdgeId>, tail: TailSpec) -> Self {
        Self { kind: RayKind::Finite, edges, tail: Some(tail) }
    }

    pub fn infinite_prefix(edges: Vec<EdgeId>) -> Self {
        Self { kind: RayKind::InfinitePrefix, edges, tail: None }
    }

    pub fn validate(&self, tree: &TreeBall) -> Result<(), MorseError> {
        match (self.kind, &self.tail) {
            (RayKind::Finite, None) => return Err(MorseError::InvalidRay("finite ray without a tail".into())),
            (RayKind::InfinitePrefix, Some(_)) => return Err(MorseError::InvalidRay("infinite ray with a tail".into())),
            _ => {}
        }
        let mut at = tree.root;
        for &e in &self.edges {
            if !tree.graph.has_edge(e) {
                return Err(MorseError::ScaleMismatch(format!("edge {e} is not in the tree ball")));
            }
            if tree.graph.source(e) != at || !tree.outgoing[&e] {
                return Err(MorseError::InvalidRay(format!("edge {e} does not continue a root-based geodesic")));
            }
            at = tree.graph.target(e);
        }
        if let Some(t) = &self.tail {
            let doubled = [t.prefix.as_slice(), &t.period, &t.period].concat();
            if free_reduce(&doubled).len() != doubled.len() {
                return Err(MorseError::InvalidRay("tail is not freely reduced".into()));
            }
        }
        Ok(())
    }

    /// `l(r)`.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Terminal tree vertex of `p(r)`.
    pub fn end_vertex(&self, tree: &TreeBall) -> VertexId {
        self.edges.last().map_or(tree.root, |&e| tree.graph.target(e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Realisation {
    pub path: PathInBall,
    /// Index into `path.vertices` where each piece `γ_i` begins; consecutive pieces
    /// share their boundary vertex.
    pub piece_starts: Vec<usize>,
    /// Tail letters realised before the ball boundary or the end of a finite tail.
    pub tail_steps: usize,
    /// The whole tail fits in the ball (only possible for a finite tail).
    pub tail_complete: bool,
}

impl Realisation {
    /// `γ_i` as a path.
    pub fn piece(&self, i: usize) -> PathInBall {
        let from = self.piece_starts[i];
        let to = self.piece_starts.get(i + 1).copied().unwrap_or(self.path.len());
        self.path.sub(from, to)
    }
}

fn star_points(tree: &TreeBall, space: &SpaceBall, r: &CombinatorialRay) -> Vec<VertexId> {
    std::iter::once(space.basepoint).chain(r.edges.iter().map(|e| tree.edge_star[e])).collect()
}

/// `γ₀ ∘ γ₁ ∘ …`: shortlex-least ball geodesics between consecutive star points, then
/// the tail word read from `ω*` until the ball ends.
pub fn realisation(tree: &TreeBall, space: &SpaceBall, r: &CombinatorialRay) -> Result<Realisation, MorseError> {
    r.validate(tree)?;
    let m = Metric::new(space);
    let stars = star_points(tree, space, r);
    let mut path = vec![space.basepoint];
    let mut piece_starts = Vec::new();
    for w in stars.windows(2) {
        piece_starts.push(path.len() - 1);
        let g = m.shortlex_geodesic(w[0], w[1])?;
        path.extend(&g.vertices[1..]);
    }
    let (mut tail_steps, mut tail_complete) = (0, false);
    if let Some(tail) = &r.tail {
        piece_starts.push(path.len() - 1);
        let gv = tree.gamma_vertex[r.end_vertex(tree)];
        let gens = &space.generating_sets[&gv];
        let index = |l: Letter| {
            gens.iter()
                .position(|w| *w == [Letter::pos(l.gen)])
                .ok_or_else(|| MorseError::InvalidRay(format!("generator {} is not a ball generator", l.gen)))
        };
        let letters: Vec<(usize, bool)> =
            tail.prefix.iter().chain(&tail.period).map(|&l| Ok((index(l)?, l.inv))).collect::<Result<_, MorseError>>()?;
        let (u, w) = letters.split_at(tail.prefix.len());
        let limit = u.len() + space.num_vertices();
        let mut x = *path.last().unwrap();
        loop {
            let Some(&(index, inverse)) = u.get(tail_steps).or_else(|| (!w.is_empty()).then(|| &w[(tail_steps - u.len()) % w.len()]))
            else {
                tail_complete = true;
                break;
            };
            let label = SpaceEdgeLabel::Gen { vertex: gv, index, inverse };
            let next = space.graph.out_edges(x).iter().find(|e| space.edge_labels[e] == label);
            match next {
                Some(&e) if tail_steps < limit => {
                    x = space.graph.target(e);
                    path.push(x);
                    tail_steps += 1;
                }
                _ => break,
            }
        }
    }
    Ok(Realisation { path: PathInBall::new(path), piece_starts, tail_steps, tail_complete })
}

/// Outgoing tree edges `α` with `π(γ[t, end]) ⊂ T_α` for some `t`. Since the last point
/// of a finite path is such a suffix, these are the edges of the root path of `π(γ(end))`.
pub fn edges_lying_on(tree: &TreeBall, space: &SpaceBall, gamma: &PathInBall) -> Result<Vec<EdgeId>, MorseError> {
    if gamma.start() != space.basepoint {
        return Err(MorseError::BadBasepoint(space.basepoint, gamma.start()));
    }
    Metric::new(space).check_path(gamma)?;
    Ok(tree.path_from_root(space.tree_label[gamma.end()]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeighborhoodOptions {
    /// The finite-type gauge is `a·M + b` for `(a, b) = inflation`.
    pub inflation: (f64, f64),
}

impl Default for NeighborhoodOptions {
    fn default() -> Self {
        Self { inflation: (3.0, 3.0) }
    }
}

/// `r′ ∈ V_k(r)`. Infinite type: `l(r′) ≥ k` and `α_k(r′) = α_k(r)`. Finite type with
/// `n = l(r)`: `l(r′) ≥ n` and `γ_n(r′)` stays pointwise within `δ` of `γ_n(r)` for
/// `t ≤ k`, where `δ` is computed from the inflated gauge.
pub fn combinatorial_neighborhood(
    tree: &TreeBall,
    space: &SpaceBall,
    r: &CombinatorialRay,
    r2: &CombinatorialRay,
    k: usize,
    gauge: &MorseGauge,
    opts: NeighborhoodOptions,
) -> Result<bool, MorseError> {
    r.validate(tree)?;
    r2.validate(tree)?;
    if r.kind == RayKind::InfinitePrefix {
        if k == 0 {
            return Err(MorseError::InvalidParameter("k must be positive for infinite rays".into()));
        }
        if k > r.len() {
            return Err(MorseError::ScaleMismatch(format!("k = {k} exceeds the known prefix {}", r.len())));
        }
        return match r2.kind {
            RayKind::InfinitePrefix if r2.len() < k => {
                Err(MorseError::ScaleMismatch(format!("k = {k} exceeds the known prefix {}", r2.len())))
            }
            _ => Ok(r2.len() >= k && r2.edges[k - 1] == r.edges[k - 1]),
        };
    }
    let n = r.len();
    if r2.len() < n {
        return match r2.kind {
            RayKind::Finite => Ok(false),
            RayKind::InfinitePrefix => Err(MorseError::ScaleMismatch(format!("need {n} edges of the second ray"))),
        };
    }
    let (a, b) = (realisation(tree, space, r)?, realisation(tree, space, r2)?);
    let (g, g2) = (a.piece(n), b.piece(n));
    for (ray, re, piece) in [(r, &a, &g), (r2, &b, &g2)] {
        let is_tail = ray.kind == RayKind::Finite && ray.len() == n;
        if is_tail && !re.tail_complete && piece.len() < k {
            return Err(MorseError::ScaleMismatch(format!("tail realised for {} steps, need {k}", piece.len())));
        }
    }
    if g.start() != g2.start() {
        return Ok(false);
    }
    let delta = delta_m(&gauge.inflate(opts.inflation.0, opts.inflation.1)?);
    Ok(pointwise_close(&Metric::new(space), &g, &g2, k, delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::{bass_serre_ball, project_tree, GraphOfGroups};
    use crate::group::word::{parse_word, power};
    use crate::group::{GroupDescriptor, DEFAULT_MAX_CELLS};

    fn z_star_z(radius: u32) -> (SpaceBall, TreeBall) {
        let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::Z, GroupDescriptor::Z]);
        g.add_trivial_edge(0, 1).unwrap();
        let b = bass_serre_ball(&g, radius, DEFAULT_MAX_CELLS).unwrap();
        let t = project_tree(&b).unwrap();
        (b, t)
    }

    fn child(t: &TreeBall, v: VertexId, pick: impl Fn(&TreeBall, VertexId) -> bool) -> EdgeId {
        *t.graph.out_edges(v).iter().find(|&&e| t.outgoing[&e] && pick(t, t.graph.target(e))).unwrap()
    }

    #[test]
    fn tail_in_root_factor_is_an_axis() {
        let (b, t) = z_star_z(5);
        let r = CombinatorialRay::finite(vec![], TailSpec { prefix: vec![], period: power(0, 1) });
        let re = realisation(&t, &b, &r).unwrap();
        assert_eq!(re.tail_steps, 5);
        assert!(re.path.vertices.iter().enumerate().all(|(i, &x)| b.distance[x] == i as u32 && b.tree_label[x] == 0));
        assert_eq!(edges_lying_on(&t, &b, &re.path).unwrap(), Vec::<EdgeId>::new());
    }

    #[test]
    fn alternating_ray_uses_unit_jumps() {
        let (b, t) = z_star_z(6);
        let e1 = child(&t, t.root, |_, _| true);
        let e2 = child(&t, t.graph.target(e1), |_, _| true);
        let r = CombinatorialRay::infinite_prefix(vec![e1, e2]);
        let re = realisation(&t, &b, &r).unwrap();
        assert_eq!(re.piece_starts.len(), 2);
        for (i, e) in [e1, e2].iter().enumerate() {
            let end = re.piece(i).end();
            assert_eq!(end, t.edge_star[e]);
        }
        assert_eq!(edges_lying_on(&t, &b, &re.path).unwrap(), vec![e1, e2]);
        let m = Metric::new(&b);
        assert_eq!(m.dist(re.path.start(), re.path.end()) as usize, re.path.len());
    }

    #[test]
    fn excursions_do_not_count() {
        let (b, t) = z_star_z(4);
        let e1 = child(&t, t.root, |_, _| true);
        let star = t.edge_star[&e1];
        let back = b.graph.neighbors(star).find(|&x| b.tree_label[x] == 0).unwrap();
        let m = Metric::new(&b);
        let mut p = m.shortlex_geodesic(b.basepoint, star).unwrap().vertices;
        p.push(back);
        let gamma = PathInBall::new(p);
        assert!(edges_lying_on(&t, &b, &gamma).unwrap().is_empty());
    }

    #[test]
    fn validation() {
        let (_, t) = z_star_z(3);
        let e1 = child(&t, t.root, |_, _| true);
        let bad = CombinatorialRay::infinite_prefix(vec![t.graph.reverse(e1)]);
        assert!(matches!(bad.validate(&t), Err(MorseError::InvalidRay(_))));
        let far = CombinatorialRay::infinite_prefix(vec![10_000]);
        assert!(matches!(far.validate(&t), Err(MorseError::ScaleMismatch(_))));
        let loopy = CombinatorialRay::finite(vec![], TailSpec { prefix: power(0, 1), period: power(0, -1) });
        assert!(matches!(loopy.validate(&t), Err(MorseError::InvalidRay(_))));
    }

    #[test]
    fn infinite_neighborhoods() {
        let (b, t) = z_star_z(6);
        let e1 = child(&t, t.root, |_, _| true);
        let mid = t.graph.target(e1);
        let outs: Vec<EdgeId> = t.graph.out_edges(mid).iter().copied().filter(|e| t.outgoing[e]).collect();
        let (e2, f2) = (outs[0], outs[1]);
        let r = CombinatorialRay::infinite_prefix(vec![e1, e2]);
        let s = CombinatorialRay::infinite_prefix(vec![e1, f2]);
        let g = MorseGauge::parse("l + e").unwrap();
        let o = NeighborhoodOptions::default();
        assert!(combinatorial_neighborhood(&t, &b, &r, &r, 2, &g, o).unwrap());
        assert!(combinatorial_neighborhood(&t, &b, &r, &s, 1, &g, o).unwrap());
        assert!(!combinatorial_neighborhood(&t, &b, &r, &s, 2, &g, o).unwrap());
        assert!(matches!(combinatorial_neighborhood(&t, &b, &r, &s, 3, &g, o), Err(MorseError::ScaleMismatch(_))));
    }

    #[test]
    fn finite_neighborhoods_follow_pointwise_distance() {
        // In F₂, a^t and a^5 b a^(t-6) are 2t - 10 apart. With M = 0 inflated to 1,
        // δ = 8, so the tails are close up to t = 8.
        let b = bass_serre_ball(&GraphOfGroups::single(GroupDescriptor::Free(2)), 9, DEFAULT_MAX_CELLS).unwrap();
        let t = project_tree(&b).unwrap();
        let names = ["a".to_string(), "b".to_string()];
        let r = CombinatorialRay::finite(vec![], TailSpec { prefix: vec![], period: power(0, 1) });
        let s = CombinatorialRay::finite(vec![], TailSpec { prefix: parse_word("aaaaab", &names).unwrap(), period: power(0, 1) });
        let g = MorseGauge::parse("0").unwrap();
        let o = NeighborhoodOptions { inflation: (1.0, 1.0) };
        for k in 0..=8 {
            assert!(combinatorial_neighborhood(&t, &b, &r, &s, k, &g, o).unwrap(), "k = {k}");
        }
        assert!(!combinatorial_neighborhood(&t, &b, &r, &s, 9, &g, o).unwrap());
        assert!(matches!(combinatorial_neighborhood(&t, &b, &r, &s, 10, &g, o), Err(MorseError::ScaleMismatch(_))));
    }
}
