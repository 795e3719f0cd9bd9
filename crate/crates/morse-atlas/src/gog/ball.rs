//! Finite balls in the Bass–Serre space `X` and their projections to the tree `T`.
//!
//! A vertex `(g, v)` of `X` is stored as a reduced path in the fundamental groupoid,
//! `k₁ e₁ k₂ e₂ … e_n h`: each `k_i` is the canonical representative of its coset of the
//! incoming edge-group image in `G_{e_i⁻}`, there is no backtracking `e_{i+1} = ē_i` with
//! `k_{i+1} = 1`, and `h` is a normal form in `G_v`. The sequence `[(k_i, e_i)]` names
//! the coset `g G_v`, so it is the tree label. Crossing an edge uses the relation
//! `f_ᾱ(x) e_α = e_α f_α(x)`.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{shift, substitute, GogError, GraphOfGroups};
use crate::graph::{EdgeId, Graph, SpanningTree, VertexId};
use crate::group::subgroup::CosetSplitter;
use crate::group::word::{inverse, shortlex_cmp, Letter, Word};
use crate::group::{GroupError, NormalForm, MAX_RADIUS};

/// Tree label: the reduced coset sequence of a vertex of `X`.
pub type CosetSeq = Vec<(Word, EdgeId)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpaceEdgeLabel {
    /// Right multiplication by generator `index` of `S_vertex`, or its inverse.
    Gen { vertex: VertexId, index: usize, inverse: bool },
    /// Crossing the Γ-edge.
    Edge(EdgeId),
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceBall {
    pub graph: Graph,
    /// `g` as a word in the generators of `fundamental_presentation(spanning_tree)`.
    pub underlying_element: Vec<Word>,
    pub gamma_vertex: Vec<VertexId>,
    /// Coset id, an index into `cosets`.
    pub tree_label: Vec<usize>,
    pub cosets: Vec<CosetSeq>,
    /// `h`, the normal form in the vertex group.
    pub fiber_element: Vec<Word>,
    /// Whether the vertex lies in the image of the last edge group of its coset sequence.
    pub in_edge_group: Vec<bool>,
    pub distance: Vec<u32>,
    pub basepoint: VertexId,
    pub radius: u32,
    pub edge_labels: BTreeMap<EdgeId, SpaceEdgeLabel>,
    /// `S_v` (positive halves), including the images of incident edge generators.
    pub generating_sets: BTreeMap<VertexId, Vec<Word>>,
    /// The underlying graph Γ and the spanning tree used for `underlying_element`.
    pub gamma: Graph,
    pub spanning_tree: SpanningTree,
}

impl SpaceBall {
    pub fn num_vertices(&self) -> usize {
        self.gamma_vertex.len()
    }

    /// Vertices whose tree label is `coset`, in id order.
    pub fn fiber(&self, coset: usize) -> Vec<VertexId> {
        (0..self.num_vertices()).filter(|&x| self.tree_label[x] == coset).collect()
    }

    /// DOT export, one fill color per fiber.
    pub fn to_dot(&self) -> String {
        const PALETTE: [&str; 8] =
            ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"];
        self.graph.to_dot_with(
            |x| format!("{x} (v{})", self.gamma_vertex[x]),
            |x| Some(PALETTE[self.tree_label[x] % PALETTE.len()].to_string()),
            |e| match self.edge_labels[&e] {
                SpaceEdgeLabel::Gen { vertex, index, inverse } => {
                    Some(format!("s{vertex}.{index}{}", if inverse { "'" } else { "" }))
                }
                SpaceEdgeLabel::Edge(a) => Some(format!("e{a}")),
            },
        )
    }
}

/// Word-problem data for walking in `X`.
pub(crate) struct Walker<'a> {
    gog: &'a GraphOfGroups,
    nf: BTreeMap<VertexId, NormalForm>,
    /// Transversal for `f_α(H_α)` in `G_{α⁺}`, per half-edge.
    split: BTreeMap<EdgeId, CosetSplitter>,
    gens: BTreeMap<VertexId, Vec<Word>>,
    /// The vertex of the basepoint `(1, root)`: the least vertex of Γ.
    root: VertexId,
}

/// State of a walker: coset sequence and fiber element.
pub(crate) type State = (CosetSeq, Word);

impl<'a> Walker<'a> {
    pub(crate) fn new(gog: &'a GraphOfGroups) -> Result<Self, GogError> {
        gog.validate()?;
        let mut nf = BTreeMap::new();
        for v in gog.graph.vertices() {
            nf.insert(v, gog.vertex_group(v).normal_form()?);
        }
        let mut split = BTreeMap::new();
        for (e, he) in gog.graph.edges() {
            let edge_nf = gog.edge_group(e).normal_form()?;
            split.insert(e, CosetSplitter::new(&nf[&he.target], &edge_nf, gog.injection(e))?);
        }
        let mut gens = BTreeMap::new();
        for v in gog.graph.vertices() {
            let engine = &nf[&v];
            let mut s: Vec<Word> = (0..engine.rank() as u32).map(|g| engine.normalize(&[Letter::pos(g)])).collect();
            s.retain(|w| !w.is_empty());
            for (e, he) in gog.graph.edges() {
                if he.target != v {
                    continue;
                }
                for w in gog.injection(e) {
                    let w = engine.normalize(w);
                    let inv = engine.normalize(&inverse(&w));
                    if !w.is_empty() && !s.iter().any(|x| *x == w || *x == inv) {
                        s.push(w);
                    }
                }
            }
            gens.insert(v, s);
        }
        let root = *gog.graph.vertex_set().first().expect("validated graphs are nonempty");
        Ok(Walker { gog, nf, split, gens, root })
    }

    pub(crate) fn end_vertex(&self, seq: &CosetSeq) -> VertexId {
        seq.last().map_or(self.root, |&(_, e)| self.gog.graph.target(e))
    }

    pub(crate) fn mul(&self, state: &State, s: &[Letter]) -> State {
        let v = self.end_vertex(&state.0);
        (state.0.clone(), self.nf[&v].mul(&state.1, s))
    }

    /// Crosses the Γ-edge `a`, which must start at the end vertex of `state`.
    pub(crate) fn cross(&self, state: &State, a: EdgeId) -> State {
        let g = &self.gog.graph;
        let (src, tgt, rev) = (g.source(a), g.target(a), g.reverse(a));
        debug_assert_eq!(src, self.end_vertex(&state.0));
        let (k, x) = self.split[&rev].split(&self.nf[&src], &state.1);
        let fx = substitute(&x, self.gog.injection(a));
        let mut seq = state.0.clone();
        if k.is_empty() && seq.last().is_some_and(|&(_, e)| e == rev) {
            let (k_prev, _) = seq.pop().unwrap();
            let h = self.nf[&tgt].mul(&k_prev, &fx);
            return (seq, h);
        }
        seq.push((k, a));
        (seq, self.nf[&tgt].normalize(&fx))
    }

    fn in_edge_group(&self, state: &State) -> bool {
        match state.0.last() {
            None => false,
            Some(&(_, e)) => self.split[&e].split(&self.nf[&self.gog.graph.target(e)], &state.1).0.is_empty(),
        }
    }

    /// `g` as a word in the fundamental-presentation generators.
    fn underlying(&self, state: &State, offset: &BTreeMap<VertexId, u32>, stable: &BTreeMap<EdgeId, u32>) -> Word {
        let g = &self.gog.graph;
        let mut w = Word::new();
        for (k, e) in &state.0 {
            w.extend(shift(k, offset[&g.source(*e)]));
            let rep = g.pair_rep(*e);
            if let Some(&t) = stable.get(&rep) {
                w.push(if *e == rep { Letter::pos(t) } else { Letter::neg(t) });
            }
        }
        w.extend(shift(&state.1, offset[&self.end_vertex(&state.0)]));
        w
    }
}

/// BFS ball of the given radius around `(1, 0)` in the Bass–Serre space.
///
/// Vertex ids are dense in BFS order. From each vertex the neighbors are generated by
/// `S_v` (each generator, then its inverse) and then by the Γ-edges out of `v` in id
/// order.
pub fn bass_serre_ball(gog: &GraphOfGroups, radius: u32, max_cells: usize) -> Result<SpaceBall, GogError> {
    if radius > MAX_RADIUS {
        return Err(GroupError::BallTooLarge { limit: MAX_RADIUS as usize, what: "radius" }.into());
    }
    let walker = Walker::new(gog)?;
    let st = gog.graph.spanning_tree()?;
    let layout = gog.fundamental_layout(&st)?;
    let mut states: Vec<State> = vec![(Vec::new(), Word::new())];
    let mut distance = vec![0u32];
    let mut index: HashMap<State, usize> = HashMap::from([(states[0].clone(), 0)]);
    let mut head = 0;
    while head < states.len() {
        if distance[head] < radius {
            let v = walker.end_vertex(&states[head].0);
            let mut next = Vec::new();
            for s in &walker.gens[&v] {
                next.push(walker.mul(&states[head], s));
                next.push(walker.mul(&states[head], &inverse(s)));
            }
            for &a in gog.graph.out_edges(v) {
                next.push(walker.cross(&states[head], a));
            }
            for st in next {
                if index.contains_key(&st) {
                    continue;
                }
                if states.len() >= max_cells {
                    return Err(GroupError::BallTooLarge { limit: max_cells, what: "vertices" }.into());
                }
                index.insert(st.clone(), states.len());
                states.push(st);
                distance.push(distance[head] + 1);
            }
        }
        head += 1;
    }

    let n = states.len();
    let mut graph = Graph::with_vertices(n);
    let mut edge_labels = BTreeMap::new();
    for (i, state) in states.iter().enumerate() {
        let v = walker.end_vertex(&state.0);
        for (idx, s) in walker.gens[&v].iter().enumerate() {
            let Some(&j) = index.get(&walker.mul(state, s)) else { continue };
            let involution = walker.nf[&v].normalize(&[s.as_slice(), s].concat()).is_empty();
            if j == i || (involution && j < i) {
                continue;
            }
            let (e, r) = graph.add_edge_pair(i, j)?;
            edge_labels.insert(e, SpaceEdgeLabel::Gen { vertex: v, index: idx, inverse: false });
            edge_labels.insert(r, SpaceEdgeLabel::Gen { vertex: v, index: idx, inverse: true });
        }
        for &a in gog.graph.out_edges(v) {
            if gog.graph.pair_rep(a) != a {
                continue;
            }
            let Some(&j) = index.get(&walker.cross(state, a)) else { continue };
            let (e, r) = graph.add_edge_pair(i, j)?;
            edge_labels.insert(e, SpaceEdgeLabel::Edge(a));
            edge_labels.insert(r, SpaceEdgeLabel::Edge(gog.graph.reverse(a)));
        }
    }

    let mut coset_index: HashMap<CosetSeq, usize> = HashMap::new();
    let mut cosets = Vec::new();
    let mut tree_label = Vec::with_capacity(n);
    for (seq, _) in &states {
        let id = *coset_index.entry(seq.clone()).or_insert_with(|| {
            cosets.push(seq.clone());
            cosets.len() - 1
        });
        tree_label.push(id);
    }
    Ok(SpaceBall {
        underlying_element: states.iter().map(|s| walker.underlying(s, &layout.offset, &layout.stable)).collect(),
        gamma_vertex: states.iter().map(|s| walker.end_vertex(&s.0)).collect(),
        in_edge_group: states.iter().map(|s| walker.in_edge_group(s)).collect(),
        fiber_element: states.into_iter().map(|s| s.1).collect(),
        graph,
        tree_label,
        cosets,
        distance,
        basepoint: 0,
        radius,
        edge_labels,
        generating_sets: walker.gens,
        gamma: gog.graph.clone(),
        spanning_tree: st,
    })
}

/// Ball in the Bass–Serre tree. Vertex ids are the coset ids of the space ball; the
/// root is the coset `G₀`.
#[derive(Debug, Clone, Serialize)]
pub struct TreeBall {
    pub graph: Graph,
    pub root: VertexId,
    /// `d_T(root, ·)`.
    pub depth: Vec<u32>,
    pub parent: Vec<Option<EdgeId>>,
    pub gamma_vertex: Vec<VertexId>,
    pub gamma_edge: BTreeMap<EdgeId, EdgeId>,
    pub outgoing: BTreeMap<EdgeId, bool>,
    /// `v*`: the vertex of `π⁻¹(v)` closest to the basepoint.
    pub vertex_star: Vec<VertexId>,
    /// `α*` for every tree edge, in the space ball.
    pub edge_star: BTreeMap<EdgeId, VertexId>,
    pub radius: u32,
}

impl TreeBall {
    /// Edges from the root to `v`, in order.
    pub fn path_from_root(&self, v: VertexId) -> Vec<EdgeId> {
        let mut path = Vec::new();
        let mut x = v;
        while let Some(e) = self.parent[x] {
            path.push(e);
            x = self.graph.source(e);
        }
        path.reverse();
        path
    }

    /// Whether `w` lies in `T_v`, i.e. `v` is on the root path of `w`.
    pub fn in_subtree(&self, w: VertexId, v: VertexId) -> bool {
        let mut x = w;
        loop {
            if x == v {
                return true;
            }
            match self.parent[x] {
                Some(e) => x = self.graph.source(e),
                None => return false,
            }
        }
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot_with(
            |v| format!("{v} (v{}, d{})", self.gamma_vertex[v], self.depth[v]),
            |v| (v == self.root).then(|| "#fb8072".to_string()),
            |e| Some(format!("e{}", self.gamma_edge[&e])),
        )
    }
}

/// Quotient of a space ball by the tree labels, with outgoing flags and star points.
/// Ties between candidate star points go to the shortlex-least underlying element, then
/// to the smaller id.
pub fn project_tree(ball: &SpaceBall) -> Result<TreeBall, GogError> {
    let malformed = |m: String| GogError::MalformedBall(m);
    let index: HashMap<&CosetSeq, usize> = ball.cosets.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let m = ball.cosets.len();
    let mut graph = Graph::with_vertices(m);
    let mut parent = vec![None; m];
    let mut gamma_edge = BTreeMap::new();
    let mut outgoing = BTreeMap::new();
    let mut gamma_vertex = vec![0; m];
    for x in 0..ball.num_vertices() {
        gamma_vertex[ball.tree_label[x]] = ball.gamma_vertex[x];
    }
    for (c, seq) in ball.cosets.iter().enumerate().skip(1) {
        let Some((_, a)) = seq.last() else { return Err(malformed(format!("coset {c} repeats the root"))) };
        let p = *index
            .get(&seq[..seq.len() - 1].to_vec())
            .ok_or_else(|| malformed(format!("parent of coset {c} is outside the ball")))?;
        let (e, r) = graph.add_edge_pair(p, c)?;
        parent[c] = Some(e);
        gamma_edge.insert(e, *a);
        outgoing.insert(e, true);
        outgoing.insert(r, false);
    }
    for (e, a) in gamma_edge.clone() {
        gamma_edge.insert(graph.reverse(e), ball.gamma.reverse(a));
    }
    // Every Γ-edge crossing in the ball must join a coset to its parent or child.
    for (e, label) in &ball.edge_labels {
        let (x, y) = (ball.graph.source(*e), ball.graph.target(*e));
        let (cx, cy) = (ball.tree_label[x], ball.tree_label[y]);
        match label {
            SpaceEdgeLabel::Gen { .. } if cx != cy => return Err(malformed(format!("generator edge {e} leaves its fiber"))),
            SpaceEdgeLabel::Edge(_) if !(parent_of(&graph, &parent, cy) == Some(cx) || parent_of(&graph, &parent, cx) == Some(cy)) => {
                return Err(malformed(format!("edge {e} joins non-adjacent cosets {cx} and {cy}")))
            }
            _ => {}
        }
    }
    if !graph.is_tree() {
        return Err(malformed("quotient is not a tree".into()));
    }
    let depth: Vec<u32> = ball.cosets.iter().map(|c| c.len() as u32).collect();

    let mut edge_star = BTreeMap::new();
    let mut vertex_star = vec![ball.basepoint; m];
    let mut best: Vec<Option<VertexId>> = vec![None; m];
    for x in 0..ball.num_vertices() {
        let c = ball.tree_label[x];
        if c == 0 || !ball.in_edge_group[x] {
            continue;
        }
        let key = |y: VertexId| (ball.distance[y], &ball.underlying_element[y], y);
        let better = best[c].map_or(true, |y| {
            let (dx, ux, _) = key(x);
            let (dy, uy, _) = key(y);
            dx.cmp(&dy).then_with(|| shortlex_cmp(ux, uy)).then(x.cmp(&y)).is_lt()
        });
        if better {
            best[c] = Some(x);
        }
    }
    for c in 1..m {
        let star = best[c].ok_or_else(|| malformed(format!("coset {c} has no in-ball edge-group vertex")))?;
        let e = parent[c].unwrap();
        let back = graph.reverse(e);
        let across = ball
            .graph
            .out_edges(star)
            .iter()
            .find(|&&f| ball.edge_labels[&f] == SpaceEdgeLabel::Edge(gamma_edge[&back]))
            .map(|&f| ball.graph.target(f))
            .ok_or_else(|| malformed(format!("star point of coset {c} has no edge back")))?;
        edge_star.insert(e, star);
        edge_star.insert(back, across);
        vertex_star[c] = star;
    }
    Ok(TreeBall { graph, root: 0, depth, parent, gamma_vertex, gamma_edge, outgoing, vertex_star, edge_star, radius: ball.radius })
}

fn parent_of(graph: &Graph, parent: &[Option<EdgeId>], c: usize) -> Option<usize> {
    parent[c].map(|e| graph.source(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{cayley_ball, GroupDescriptor, DEFAULT_MAX_CELLS};

    fn z_star_z() -> GraphOfGroups {
        let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::Z, GroupDescriptor::Z]);
        g.add_trivial_edge(0, 1).unwrap();
        g
    }

    #[test]
    fn single_vertex_is_cayley_ball() {
        let g = GraphOfGroups::single(GroupDescriptor::ZPow(2));
        let b = bass_serre_ball(&g, 3, DEFAULT_MAX_CELLS).unwrap();
        let c = cayley_ball(&GroupDescriptor::ZPow(2), 3, DEFAULT_MAX_CELLS).unwrap();
        assert_eq!(b.num_vertices(), c.graph.num_vertices());
        assert_eq!(b.graph.num_edges(), c.graph.num_edges());
        let t = project_tree(&b).unwrap();
        assert_eq!((t.graph.num_vertices(), t.graph.num_edges()), (1, 0));
        assert_eq!(t.vertex_star[0], b.basepoint);
    }

    #[test]
    fn free_product_of_two_z() {
        let g = z_star_z();
        let b = bass_serre_ball(&g, 2, DEFAULT_MAX_CELLS).unwrap();
        // Radius 1: a, A and the crossing to (1, 1).
        assert_eq!(b.distance.iter().filter(|&&d| d == 1).count(), 3);
        let t = project_tree(&b).unwrap();
        assert!(t.graph.is_tree());
        let b3 = bass_serre_ball(&g, 3, DEFAULT_MAX_CELLS).unwrap();
        let t3 = project_tree(&b3).unwrap();
        assert!(t3.graph.degree(t3.root) >= 3);
        for (e, &out) in &t3.outgoing {
            let (s, d) = (t3.graph.source(*e), t3.graph.target(*e));
            assert_eq!(out, t3.depth[s] < t3.depth[d]);
        }
        // Trivial edge groups: each coset is entered through its star point.
        for c in 1..b3.cosets.len() {
            let star = t3.vertex_star[c];
            assert!(b3.fiber(c).iter().all(|&x| b3.distance[x] >= b3.distance[star]));
            assert!(b3.fiber_element[star].is_empty());
        }
    }

    #[test]
    fn amalgam_over_z_has_fat_edge_fibers() {
        // ⟨a,b⟩ ×_{b = a'} ⟨a',b'⟩ with Z² vertex groups.
        let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::ZPow(2), GroupDescriptor::ZPow(2)]);
        g.add_edge(0, 1, GroupDescriptor::Z, vec![vec![Letter::pos(1)]], vec![vec![Letter::pos(0)]]).unwrap();
        let b = bass_serre_ball(&g, 4, DEFAULT_MAX_CELLS).unwrap();
        let t = project_tree(&b).unwrap();
        assert!(t.graph.is_tree());
        // The root coset's edge-group image is ⟨b⟩, so (b^k, 0) all cross into the same coset.
        let child = t.graph.target(t.graph.out_edges(t.root)[0]);
        let crossings = b
            .graph
            .edges()
            .filter(|(e, he)| b.tree_label[he.source] == 0 && b.tree_label[he.target] == child && matches!(b.edge_labels[e], SpaceEdgeLabel::Edge(_)))
            .count();
        assert!(crossings >= 5, "{crossings}");
        for (&e, &x) in &t.edge_star {
            if t.outgoing[&e] {
                let back = t.edge_star[&t.graph.reverse(e)];
                assert_eq!(b.distance[back] + 1, b.distance[x]);
            }
        }
    }

    #[test]
    fn hnn_loop() {
        // Z² with a loop identifying a and b: the ball stays a tree of cosets.
        let mut g = GraphOfGroups::single(GroupDescriptor::ZPow(2));
        g.add_edge(0, 0, GroupDescriptor::Z, vec![vec![Letter::pos(0)]], vec![vec![Letter::pos(1)]]).unwrap();
        let b = bass_serre_ball(&g, 4, DEFAULT_MAX_CELLS).unwrap();
        let t = project_tree(&b).unwrap();
        assert!(t.graph.is_tree());
        assert!(b.underlying_element.iter().any(|w| w.iter().any(|l| l.gen == 2)), "stable letter appears");
    }

    #[test]
    fn symbolic_groups_have_no_ball() {
        let g = GraphOfGroups::single(GroupDescriptor::symbolic(crate::group::SymbolicKind::Sol));
        assert!(matches!(bass_serre_ball(&g, 1, 10), Err(GogError::Group(GroupError::WordProblemUnavailable(_)))));
        assert!(matches!(
            bass_serre_ball(&z_star_z(), 6, 20),
            Err(GogError::Group(GroupError::BallTooLarge { .. }))
        ));
    }
}
