//! Finite-data validators for maps between Bass–Serre trees and for local bijections.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::StarError;
use crate::gog::{project_tree, CosetSeq, GraphOfGroups, SpaceBall, TreeBall};
use crate::graph::{EdgeId, VertexId};
use crate::group::cayley::cayley_ball_with;
use crate::group::subgroup::CosetSplitter;
use crate::group::word::{shortlex_cmp, Word};
use crate::group::{properties_of, Fact, GroupError, NormalForm, MAX_RADIUS};
use crate::morse::Metric;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotCheckable,
    /// Checked on finitely many instances only.
    Sampled,
    /// Measured and reported, with no pass criterion.
    Reported,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionResult {
    pub id: String,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

fn cond(id: &str, name: &str, status: Status, detail: impl Into<String>) -> ConditionResult {
    ConditionResult { id: id.into(), name: name.into(), status, detail: detail.into() }
}

fn children(t: &TreeBall, v: VertexId) -> impl Iterator<Item = (EdgeId, VertexId)> + '_ {
    t.graph.out_edges(v).iter().filter(|e| t.outgoing[e]).map(|&e| (e, t.graph.target(e)))
}

/// Outgoing edges on the tree geodesic between `x` and `y`.
fn geodesic_edges(t: &TreeBall, x: VertexId, y: VertexId) -> Vec<EdgeId> {
    let (px, py) = (t.path_from_root(x), t.path_from_root(y));
    let common = px.iter().zip(&py).take_while(|(a, b)| a == b).count();
    px[common..].iter().chain(&py[common..]).copied().collect()
}

/// A partial vertex map between tree balls, with optional side data.
pub struct TreeMapInput<'a> {
    pub source: &'a TreeBall,
    pub target: &'a TreeBall,
    pub target_gog: &'a GraphOfGroups,
    pub phi: &'a BTreeMap<VertexId, VertexId>,
    /// Morse flags of outgoing edges at one declared gauge, in the source and the target.
    pub edge_morse: Option<(&'a BTreeMap<EdgeId, bool>, &'a BTreeMap<EdgeId, bool>)>,
    /// When set, the boundary maps are identity stubs and this is the source graph of groups.
    pub identity_boundary_maps: Option<&'a GraphOfGroups>,
    /// Accept the coarse surjectivity constant if it is at most this.
    pub c4_bound: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeMapReport {
    pub conditions: Vec<ConditionResult>,
    /// Least constant for which coarse surjectivity holds on the checked pairs.
    pub c4: u32,
    pub injectivity_witness: Option<(VertexId, VertexId)>,
}

impl TreeMapReport {
    pub fn status(&self, id: &str) -> Option<Status> {
        self.conditions.iter().find(|c| c.id == id).map(|c| c.status)
    }

    /// No checked condition failed.
    pub fn passes(&self) -> bool {
        self.conditions.iter().all(|c| c.status != Status::Fail)
    }
}

/// Checks the tree-map conditions on the finite domain of `phi`, which must be a
/// parent-closed set of source vertices.
pub fn check_tree_map(input: &TreeMapInput) -> Result<TreeMapReport, StarError> {
    let (s, t, phi) = (input.source, input.target, input.phi);
    let (ns, nt) = (s.graph.num_vertices(), t.graph.num_vertices());
    if phi.is_empty() {
        return Err(StarError::BadMap("empty domain".into()));
    }
    for (&v, &w) in phi {
        if v >= ns || w >= nt {
            return Err(StarError::BadMap(format!("{v} -> {w} leaves the balls")));
        }
        if let Some(e) = s.parent[v] {
            if !phi.contains_key(&s.graph.source(e)) {
                return Err(StarError::BadMap(format!("domain is not a subtree: parent of {v} is missing")));
            }
        }
    }
    if t.gamma_vertex.iter().any(|&g| !input.target_gog.graph.has_vertex(g)) {
        return Err(StarError::BadMap("target graph of groups does not match the target tree".into()));
    }
    let mut out = Vec::new();

    let root_ok = phi.get(&s.root) == Some(&t.root);
    out.push(cond("1", "root", if root_ok { Status::Pass } else { Status::Fail }, format!("phi(root) = {:?}", phi.get(&s.root))));

    let mut seen: HashMap<VertexId, VertexId> = HashMap::new();
    let mut witness = None;
    for (&v, &w) in phi {
        if let Some(&u) = seen.get(&w) {
            witness = Some((u, v));
            break;
        }
        seen.insert(w, v);
    }
    let detail = witness.map_or_else(|| "injective".to_string(), |(a, b)| format!("{a} and {b} map to {}", phi[&a]));
    out.push(cond("2", "injectivity", if witness.is_none() { Status::Pass } else { Status::Fail }, detail));

    let mut nest_fail = None;
    'nest: for (&v, &fv) in phi {
        for (&w, &fw) in phi {
            if s.in_subtree(v, w) != t.in_subtree(fv, fw) {
                nest_fail = Some((v, w));
                break 'nest;
            }
        }
    }
    let detail = nest_fail.map_or_else(
        || format!("{} ordered pairs", phi.len() * phi.len()),
        |(v, w)| format!("{v} in subtree of {w} is {} but images disagree", s.in_subtree(v, w)),
    );
    out.push(cond("3", "nestedness", if nest_fail.is_none() { Status::Pass } else { Status::Fail }, detail));

    // Interior vertices have all their in-ball children in the domain and are not in the
    // deepest layer; the frontier is the least image depth of a non-interior vertex.
    let max_depth = s.depth.iter().copied().max().unwrap_or(0);
    let interior = |v: VertexId| s.depth[v] < max_depth && children(s, v).all(|(_, c)| phi.contains_key(&c));
    let frontier = phi.iter().filter(|(&v, _)| !interior(v)).map(|(_, &w)| t.depth[w]).min().unwrap_or(u32::MAX);
    let mut c4 = 1;
    for (&v, &fv) in phi.iter().filter(|(&v, _)| interior(v)) {
        let images: Vec<VertexId> = children(s, v).map(|(_, c)| phi[&c]).collect();
        for w in 0..nt {
            if w == fv || !t.in_subtree(w, fv) {
                continue;
            }
            if !images.iter().any(|&x| t.in_subtree(w, x)) {
                c4 = c4.max(t.depth[w] - t.depth[fv] + 1);
            }
        }
    }
    let c4_ok = input.c4_bound.map_or(c4 < t.radius.max(1), |b| c4 <= b);
    out.push(cond("4", "coarse surjectivity", if c4_ok { Status::Pass } else { Status::Fail }, format!("C4 = {c4}")));

    let image: std::collections::BTreeSet<VertexId> = phi.values().copied().collect();
    let (mut missing, mut unknown, mut checked) = (Vec::new(), 0, 0);
    for u in (0..nt).filter(|&u| t.depth[u] < frontier) {
        match properties_of(input.target_gog.vertex_group(t.gamma_vertex[u])).has_empty_morse_boundary {
            Fact::Known(false) => {
                checked += 1;
                if !image.contains(&u) {
                    missing.push(u);
                }
            }
            Fact::Known(true) => {}
            _ => unknown += 1,
        }
    }
    let status = if !missing.is_empty() {
        Status::Fail
    } else if unknown > 0 {
        Status::NotCheckable
    } else {
        Status::Pass
    };
    out.push(cond(
        "5",
        "partial surjectivity",
        status,
        format!("{checked} vertices with non-empty boundary above depth {frontier}, missing {missing:?}, unknown {unknown}"),
    ));

    match input.identity_boundary_maps {
        None => {
            out.push(cond("6", "boundary homeomorphisms", Status::NotCheckable, "not checkable at finite scale"));
        }
        Some(src_gog) => {
            let (mut bad, mut unknown) = (Vec::new(), 0);
            for (&v, &w) in phi {
                let a = properties_of(src_gog.vertex_group(s.gamma_vertex[v])).morse_boundary;
                let b = properties_of(input.target_gog.vertex_group(t.gamma_vertex[w])).morse_boundary;
                match (a, b) {
                    (Fact::Known(x), Fact::Known(y)) if x != y => bad.push(v),
                    (Fact::Known(_), Fact::Known(_)) => {}
                    _ => unknown += 1,
                }
            }
            let status = if !bad.is_empty() {
                Status::Fail
            } else if unknown > 0 {
                Status::NotCheckable
            } else {
                Status::Pass
            };
            out.push(cond("6", "boundary homeomorphisms", status, format!("identity stubs; mismatched boundary types at {bad:?}")));
        }
    }

    match input.edge_morse {
        None => out.push(cond("7a", "edge Morseness", Status::NotCheckable, "no edge Morse data")),
        Some((fs, ft)) => {
            let (mut bad, mut skipped, mut checked) = (Vec::new(), 0, 0);
            for (&c, &fc) in phi {
                let Some(e) = s.parent[c] else { continue };
                let fp = phi[&s.graph.source(e)];
                let path = geodesic_edges(t, fp, fc);
                let flags: Option<Vec<bool>> = path.iter().map(|x| ft.get(x).copied()).collect();
                match (fs.get(&e), flags) {
                    (Some(&a), Some(f)) => {
                        checked += 1;
                        if a != f.iter().all(|&x| x) {
                            bad.push(e);
                        }
                    }
                    _ => skipped += 1,
                }
            }
            let status = if bad.is_empty() { Status::Pass } else { Status::Fail };
            out.push(cond("7a", "edge Morseness", status, format!("{checked} edges checked, {skipped} without flags, failing {bad:?}")));
        }
    }

    let status_7b = match input.identity_boundary_maps {
        Some(src_gog)
            if phi.iter().all(|(&v, &w)| {
                src_gog.vertex_group(s.gamma_vertex[v]) == input.target_gog.vertex_group(t.gamma_vertex[w])
            }) =>
        {
            (Status::Pass, "identity stubs between identical vertex groups")
        }
        _ => (Status::NotCheckable, "not checkable at finite scale"),
    };
    out.push(cond("7b", "boundary Morseness", status_7b.0, status_7b.1));

    Ok(TreeMapReport { conditions: out, c4, injectivity_witness: witness })
}

/// One row of the length comparison for a local bijection.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LengthRow {
    pub child: VertexId,
    pub edge: EdgeId,
    /// Distance in the source space from `v*` to the point of `v`'s coset next to the child.
    pub coset_distance: u32,
    pub representative: Word,
    pub image: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalBijection {
    pub source_vertex: VertexId,
    pub target_vertex: VertexId,
    /// `q_v` on `v` and its in-ball children.
    pub map: BTreeMap<VertexId, VertexId>,
    pub conditions: Vec<ConditionResult>,
    pub lengths: Vec<LengthRow>,
}

impl LocalBijection {
    pub fn status(&self, id: &str) -> Option<Status> {
        self.conditions.iter().find(|c| c.id == id).map(|c| c.status)
    }
}

/// Shortlex enumeration of a vertex group and of the canonical transversal of one edge
/// group image, complete up to `radius`.
struct Enumeration {
    elements: Vec<Word>,
    reps: Vec<Word>,
    radius: u32,
}

impl Enumeration {
    fn new(nf: &NormalForm, split: &CosetSplitter, radius: u32, max_cells: usize) -> Result<Self, StarError> {
        let names = (0..nf.rank()).map(|i| format!("x{i}")).collect();
        let ball = cayley_ball_with(nf, names, radius, max_cells).map_err(|e| match e {
            GroupError::BallTooLarge { .. } => StarError::ScaleExceeded(format!("enumerating the vertex group to radius {radius}: {e}")),
            e => StarError::Gog(e.into()),
        })?;
        let mut elements = ball.words;
        elements.sort_by(|a, b| shortlex_cmp(a, b));
        let reps = elements.iter().filter(|h| split.split(nf, h).0 == **h).cloned().collect();
        Ok(Self { elements, reps, radius })
    }

    /// `ν(k)`: the element whose shortlex rank equals the rank of `k` among representatives.
    fn nu(&self, k: &Word) -> Option<&Word> {
        if k.len() as u32 > self.radius {
            return None;
        }
        let r = self.reps.binary_search_by(|x| shortlex_cmp(x, k)).ok()?;
        self.elements.get(r)
    }

    fn nu_inverse(&self, g: &Word) -> Option<&Word> {
        let r = self.elements.binary_search_by(|x| shortlex_cmp(x, g)).ok()?;
        self.reps.get(r)
    }
}

/// The local bijection of the empty-boundary case at source tree vertex `v` (default the
/// root) onto target tree vertex `w` (default the root), where the target ball is a ball
/// of `gog.with_trivial_edges()`.
///
/// For each Γ-edge `β` at `v`, the child coset with canonical representative `k` goes to
/// the child `(ν_β(k), β)` of `w`, where `ν_β` matches representatives and group elements
/// by shortlex rank, so the trivial coset goes to the identity.
pub fn build_empty_boundary_bijection(
    gog: &GraphOfGroups,
    source: &SpaceBall,
    target: &SpaceBall,
    v: Option<VertexId>,
    w: Option<VertexId>,
    max_cells: usize,
) -> Result<LocalBijection, StarError> {
    gog.validate()?;
    if source.gamma != gog.graph || target.gamma != gog.graph {
        return Err(StarError::InvalidInput("balls were not built from this graph of groups".into()));
    }
    let (st, tt) = (project_tree(source)?, project_tree(target)?);
    let v = v.unwrap_or(st.root);
    let w = w.unwrap_or(tt.root);
    if v >= st.graph.num_vertices() || w >= tt.graph.num_vertices() {
        return Err(StarError::InvalidInput(format!("tree vertex {v} or {w} is outside the balls")));
    }
    let gv = st.gamma_vertex[v];
    if tt.gamma_vertex[w] != gv {
        return Err(StarError::InvalidInput(format!("{v} and {w} lie over different vertices of the graph")));
    }
    let group = gog.vertex_group(gv);
    match properties_of(group).has_empty_morse_boundary {
        Fact::Known(true) => {}
        Fact::Known(false) => return Err(StarError::WrongCase(format!("{group} has non-empty Morse boundary"))),
        _ => return Err(StarError::WrongCase(format!("Morse boundary of {group} is not known to be empty"))),
    }
    let nf = group.normal_form().map_err(|e| StarError::Gog(e.into()))?;
    let target_index: HashMap<&CosetSeq, VertexId> = target.cosets.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let seq_w = &target.cosets[w];
    let metric = Metric::new(source);

    let mut map = BTreeMap::from([(v, w)]);
    let mut lengths = Vec::new();
    let mut roundtrip = (0usize, 0usize, 0usize);
    for beta in gog.graph.out_edges(gv).iter().copied() {
        let rev = gog.graph.reverse(beta);
        let edge_nf = gog.edge_group(beta).normal_form().map_err(|e| StarError::Gog(e.into()))?;
        let split = CosetSplitter::new(&nf, &edge_nf, gog.injection(rev)).map_err(|e| StarError::Gog(e.into()))?;
        let kids: Vec<(EdgeId, VertexId)> = children(&st, v).filter(|&(e, _)| st.gamma_edge[&e] == beta).collect();
        let tkids: Vec<VertexId> = children(&tt, w).filter(|&(e, _)| tt.gamma_edge[&e] == beta).map(|(_, c)| c).collect();
        let need = kids
            .iter()
            .map(|&(_, c)| source.cosets[c].last().unwrap().0.len())
            .chain(tkids.iter().map(|&c| target.cosets[c].last().unwrap().0.len()))
            .max()
            .unwrap_or(0) as u32;
        let mut en = Enumeration::new(&nf, &split, need, max_cells)?;
        for (e, c) in kids {
            let k = source.cosets[c].last().unwrap().0.clone();
            let g = en.nu(&k).expect("enumeration covers the representative").clone();
            let mut seq = seq_w.clone();
            seq.push((g.clone(), beta));
            let &img = target_index.get(&seq).ok_or_else(|| {
                StarError::ScaleExceeded(format!("image of child {c} is outside the target ball"))
            })?;
            map.insert(c, img);
            let inside = st.edge_star.get(&st.graph.reverse(e)).copied();
            let coset_distance = inside.map_or(u32::MAX, |x| metric.dist(st.vertex_star[v], x));
            lengths.push(LengthRow { child: c, edge: beta, coset_distance, representative: k, image: g });
        }
        // Preimages of the target children: ν is onto, so each is hit once its preimage is
        // in the source ball. Grow the enumeration until the ranks are covered.
        for c in tkids {
            let g = &target.cosets[c].last().unwrap().0;
            while en.nu_inverse(g).is_none() && en.radius < MAX_RADIUS {
                let r = (en.radius * 2).clamp(1, MAX_RADIUS);
                en = Enumeration::new(&nf, &split, r, max_cells)?;
            }
            match en.nu_inverse(g) {
                Some(k) if en.nu(k) == Some(g) => {
                    if map.values().any(|&x| x == c) {
                        roundtrip.0 += 1;
                    } else {
                        roundtrip.1 += 1;
                    }
                }
                Some(_) => roundtrip.2 += 1,
                None => roundtrip.1 += 1,
            }
        }
    }

    let mut conditions = Vec::new();
    let nested_fail: Vec<VertexId> =
        map.iter().filter(|(&c, &x)| c != v && (x == w || !tt.in_subtree(x, w))).map(|(&c, _)| c).collect();
    conditions.push(cond(
        "I",
        "nestedness",
        if nested_fail.is_empty() { Status::Pass } else { Status::Fail },
        format!("{} children, failing {nested_fail:?}", map.len() - 1),
    ));
    conditions.push(cond(
        "II",
        "coarse surjectivity",
        if roundtrip.2 == 0 { Status::Pass } else { Status::Fail },
        format!(
            "C = 1 on the finite range: {} target children hit, {} with preimage outside the source ball, {} inconsistent",
            roundtrip.0, roundtrip.1, roundtrip.2
        ),
    ));
    let imgs: Vec<(VertexId, VertexId)> = map.iter().filter(|(&c, _)| c != v).map(|(&c, &x)| (c, x)).collect();
    let mut nest_pair = None;
    'pairs: for &(a, xa) in &imgs {
        for &(b, xb) in &imgs {
            if a != b && tt.in_subtree(xa, xb) {
                nest_pair = Some((a, b));
                break 'pairs;
            }
        }
    }
    conditions.push(cond(
        "III",
        "non-nestedness",
        if nest_pair.is_none() { Status::Pass } else { Status::Fail },
        nest_pair.map_or_else(|| format!("{} pairs", imgs.len() * imgs.len()), |p| format!("{p:?} nested")),
    ));
    let mut partial_bad = Vec::new();
    for &(c, x) in &imgs {
        for e in geodesic_edges(&tt, w, x) {
            let u = tt.graph.target(e);
            let nonempty = properties_of(gog.vertex_group(tt.gamma_vertex[u])).has_empty_morse_boundary == Fact::Known(false);
            if u != x && u != w && nonempty {
                partial_bad.push(c);
            }
        }
    }
    conditions.push(cond(
        "IV",
        "partial surjectivity",
        if partial_bad.is_empty() { Status::Pass } else { Status::Fail },
        format!("images are children of the target vertex; failing {partial_bad:?}"),
    ));
    let worst = lengths.iter().map(|r| r.image.len() as i64 - r.representative.len() as i64).max().unwrap_or(0);
    conditions.push(cond(
        "V",
        "Morse condition",
        Status::Reported,
        format!("{} rows; image length minus representative length is at most {worst}", lengths.len()),
    ));
    for (id, name) in [("VI", "homeomorphism"), ("VII", "geodesics"), ("VIII", "commutativity")] {
        conditions.push(cond(id, name, Status::Vacuous, "empty boundary"));
    }
    Ok(LocalBijection { source_vertex: v, target_vertex: w, map, conditions, lengths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gog::bass_serre_ball;
    use crate::group::word::Letter;
    use crate::group::{GroupDescriptor, DEFAULT_MAX_CELLS};

    fn trees(g: &GraphOfGroups, r: u32) -> (SpaceBall, TreeBall) {
        let b = bass_serre_ball(g, r, DEFAULT_MAX_CELLS).unwrap();
        let t = project_tree(&b).unwrap();
        (b, t)
    }

    fn z_star_z() -> GraphOfGroups {
        let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::Z, GroupDescriptor::Z]);
        g.add_trivial_edge(0, 1).unwrap();
        g
    }

    fn input<'a>(t: &'a TreeBall, g: &'a GraphOfGroups, phi: &'a BTreeMap<VertexId, VertexId>) -> TreeMapInput<'a> {
        TreeMapInput { source: t, target: t, target_gog: g, phi, edge_morse: None, identity_boundary_maps: None, c4_bound: None }
    }

    #[test]
    fn identity_map_passes() {
        let g = z_star_z();
        let (_, t) = trees(&g, 4);
        let phi: BTreeMap<VertexId, VertexId> = (0..t.graph.num_vertices()).map(|v| (v, v)).collect();
        let r = check_tree_map(&input(&t, &g, &phi)).unwrap();
        assert_eq!(r.c4, 1);
        assert!(r.passes(), "{r:?}");
        for id in ["1", "2", "3", "4", "5"] {
            assert_eq!(r.status(id), Some(Status::Pass), "{id}");
        }
        assert_eq!(r.status("6"), Some(Status::NotCheckable));
        let flags: BTreeMap<EdgeId, bool> = t.outgoing.iter().filter(|(_, &o)| o).map(|(&e, _)| (e, true)).collect();
        let with = TreeMapInput { edge_morse: Some((&flags, &flags)), identity_boundary_maps: Some(&g), ..input(&t, &g, &phi) };
        let r = check_tree_map(&with).unwrap();
        for id in ["6", "7a", "7b"] {
            assert_eq!(r.status(id), Some(Status::Pass), "{id}");
        }
    }

    #[test]
    fn collapsing_siblings_breaks_injectivity() {
        let g = z_star_z();
        let (_, t) = trees(&g, 3);
        let kids: Vec<VertexId> = children(&t, t.root).map(|(_, c)| c).take(2).collect();
        let phi = BTreeMap::from([(t.root, t.root), (kids[0], kids[0]), (kids[1], kids[0])]);
        let r = check_tree_map(&input(&t, &g, &phi)).unwrap();
        assert_eq!(r.status("2"), Some(Status::Fail));
        assert_eq!(r.injectivity_witness, Some((kids[0], kids[1])));
        let orphan = BTreeMap::from([(kids[0], kids[0])]);
        assert!(matches!(check_tree_map(&input(&t, &g, &orphan)), Err(StarError::BadMap(_))));
    }

    #[test]
    fn coset_sequence_map_between_free_products() {
        // ν is the identity for trivial edge groups, so q maps each coset sequence to itself.
        let g = z_star_z();
        let (bs, ts) = trees(&g, 4);
        let (bt, tt) = trees(&g.with_trivial_edges(), 4);
        let index: HashMap<&CosetSeq, VertexId> = bt.cosets.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let phi: BTreeMap<VertexId, VertexId> = bs.cosets.iter().enumerate().map(|(i, c)| (i, index[c])).collect();
        let r = check_tree_map(&TreeMapInput { target: &tt, ..input(&ts, &g, &phi) }).unwrap();
        assert_eq!(r.status("3"), Some(Status::Pass));
        assert_eq!(r.status("4"), Some(Status::Pass));
    }

    #[test]
    fn empty_boundary_bijection_on_amalgam() {
        // Z² ∗_Z Z² over b = a'.
        let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::ZPow(2), GroupDescriptor::ZPow(2)]);
        g.add_edge(0, 1, GroupDescriptor::Z, vec![vec![Letter::pos(1)]], vec![vec![Letter::pos(0)]]).unwrap();
        let src = bass_serre_ball(&g, 3, DEFAULT_MAX_CELLS).unwrap();
        let tgt = bass_serre_ball(&g.with_trivial_edges(), 3, DEFAULT_MAX_CELLS).unwrap();
        let q = build_empty_boundary_bijection(&g, &src, &tgt, None, None, DEFAULT_MAX_CELLS).unwrap();
        for id in ["I", "II", "III", "IV"] {
            assert_eq!(q.status(id), Some(Status::Pass), "{id}: {:?}", q.conditions);
        }
        assert!(q.map.len() > 3);
        let trivial = q.lengths.iter().find(|r| r.representative.is_empty()).unwrap();
        assert!(trivial.image.is_empty());
        assert!(q.lengths.iter().all(|r| r.image.len() <= r.representative.len()));
        let f = GraphOfGroups::single(GroupDescriptor::Free(2));
        let b = bass_serre_ball(&f, 2, DEFAULT_MAX_CELLS).unwrap();
        assert!(matches!(build_empty_boundary_bijection(&f, &b, &b, None, None, DEFAULT_MAX_CELLS), Err(StarError::WrongCase(_))));
    }
}
