//! Morseless stars: validation, peripheral structures, edge-group trivialization and
//! the reduction of a graph of groups to one with trivial edge groups.
//!
//! Trivialization is justified by known theorems, so the operations here check their
//! hypotheses and record a replayable trace; nothing is constructed at the boundary.

mod tree_map;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gog::{GogError, GraphOfGroups};
use crate::graph::{EdgeId, SpanningTree, VertexId};
use crate::group::kb::admits_peripheral;
use crate::group::{properties_of, Fact, GroupDescriptor};

pub use tree_map::{
    build_empty_boundary_bijection, check_tree_map, ConditionResult, LengthRow, LocalBijection, Status, TreeMapInput,
    TreeMapReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StarError {
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error("hypothesis ({assumption}) violated: {clause}")]
    HypothesisViolated { assumption: u8, clause: String },
    #[error("not a relatively hyperbolic star: {0}")]
    NotRelHypStar(String),
    #[error("bad map: {0}")]
    BadMap(String),
    #[error("wrong case: {0}")]
    WrongCase(String),
    #[error("scale exceeded: {0}")]
    ScaleExceeded(String),
    #[error("replay mismatch at step {step}: expected {expected}, got {actual}")]
    Replay { step: usize, expected: String, actual: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Hypothesis numbering used by `HypothesisViolated`.
pub const EDGE_GROUPS: u8 = 1;
pub const RELATIVELY_HYPERBOLIC: u8 = 2;
pub const EDGES_TOUCH_W: u8 = 3;

/// Checks on one edge pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCheck {
    /// Pair representative.
    pub edge: EdgeId,
    pub group: String,
    /// Declared in the knowledge base, or unknown.
    pub undistorted: Fact<bool>,
    pub wide: bool,
    /// Infinite index at both ends.
    pub infinite_index: bool,
}

impl EdgeCheck {
    pub fn passes(&self) -> bool {
        self.undistorted.is_true() && self.wide && self.infinite_index
    }

    /// First failing clause, in the order undistorted, wide, infinite index.
    fn failure(&self) -> Option<String> {
        let e = self.edge;
        if !self.undistorted.is_true() {
            let why = if self.undistorted == Fact::Known(false) { "is distorted" } else { "has no declared undistortedness" };
            Some(format!("edge {e}: edge group {} {why}", self.group))
        } else if !self.wide {
            Some(format!("edge {e}: edge group {} is not wide", self.group))
        } else if !self.infinite_index {
            Some(format!("edge {e}: edge group {} does not have infinite index at both ends", self.group))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PeripheralRole {
    /// Supplied with the center's relatively hyperbolic structure.
    Given,
    /// Whole leaf group across a spanning-tree edge at the center.
    Leaf { edge: EdgeId, vertex: VertexId },
    /// Edge group of a loop at the center, once per pair.
    Loop { edge: EdgeId },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Peripheral {
    pub role: PeripheralRole,
    pub group: GroupDescriptor,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarReport {
    pub center: Option<VertexId>,
    pub is_star_shape: bool,
    pub edges: Vec<EdgeCheck>,
    pub is_morseless_star: bool,
    /// Whether the center is hyperbolic relative to a collection admitting every edge group.
    pub center_admits_edge_groups: bool,
    pub relatively_hyperbolic: Option<Vec<Peripheral>>,
    pub failures: Vec<String>,
}

fn edge_check(gog: &GraphOfGroups, e: EdgeId) -> EdgeCheck {
    let rev = gog.graph.reverse(e);
    let h = gog.edge_group(e);
    let (f1, f2) = (gog.edge_facts(e), gog.edge_facts(rev));
    let undistorted = match (&f1.undistorted, &f2.undistorted) {
        (Fact::Known(false), _) | (_, Fact::Known(false)) => Fact::Known(false),
        (Fact::Known(true), Fact::Known(true)) => Fact::Known(true),
        _ => Fact::Unknown,
    };
    let wide = h.is_trivial_tag() || properties_of(h).is_wide.is_true();
    EdgeCheck {
        edge: e,
        group: h.to_string(),
        undistorted,
        wide,
        infinite_index: f1.infinite_index.is_true() && f2.infinite_index.is_true(),
    }
}

fn touches_all(gog: &GraphOfGroups, c: VertexId) -> bool {
    gog.graph.edges().all(|(_, he)| he.source == c || he.target == c)
}

fn admits_all(gog: &GraphOfGroups, c: VertexId) -> bool {
    let g = gog.vertex_group(c);
    gog.graph.out_edges(c).iter().all(|&e| admits_peripheral(g, gog.edge_group(e)))
}

/// Validates `gog` as a Morseless star. The center is the least vertex incident to every
/// edge, preferring one whose group admits the edge groups as peripherals.
pub fn validate_morseless_star(gog: &GraphOfGroups) -> Result<StarReport, StarError> {
    gog.validate()?;
    let candidates: Vec<VertexId> = gog.graph.vertices().filter(|&c| touches_all(gog, c)).collect();
    match candidates.iter().find(|&&c| admits_all(gog, c)).or(candidates.first()) {
        Some(&c) => validate_morseless_star_at(gog, c),
        None => {
            let edges: Vec<EdgeCheck> = gog.graph.edge_pairs().map(|e| edge_check(gog, e)).collect();
            Ok(StarReport {
                center: None,
                is_star_shape: false,
                edges,
                is_morseless_star: false,
                center_admits_edge_groups: false,
                relatively_hyperbolic: None,
                failures: vec!["no vertex is incident to every edge".into()],
            })
        }
    }
}

pub fn validate_morseless_star_at(gog: &GraphOfGroups, center: VertexId) -> Result<StarReport, StarError> {
    gog.validate()?;
    if !gog.graph.has_vertex(center) {
        return Err(StarError::InvalidInput(format!("center {center} is not a vertex")));
    }
    let is_star_shape = touches_all(gog, center);
    let edges: Vec<EdgeCheck> = gog.graph.edge_pairs().map(|e| edge_check(gog, e)).collect();
    let mut failures = Vec::new();
    if !is_star_shape {
        failures.push(format!("some edge is not incident to the center {center}"));
    }
    failures.extend(edges.iter().filter_map(EdgeCheck::failure));
    let is_morseless_star = failures.is_empty();
    let admits = is_star_shape && admits_all(gog, center);
    if is_star_shape && !admits {
        failures.push(format!("center group {} does not admit every edge group as a peripheral", gog.vertex_group(center)));
    }
    let relatively_hyperbolic = if admits { peripheral_structure(gog, center, &[], None, &[]).ok() } else { None };
    Ok(StarReport {
        center: Some(center),
        is_star_shape,
        edges,
        is_morseless_star,
        center_admits_edge_groups: admits,
        relatively_hyperbolic,
        failures,
    })
}

/// The peripheral structure `𝒜 ⊔ ℋ′₁ ⊔ ℋ′₂` of a relatively hyperbolic star: `extra`,
/// then the leaf groups across spanning-tree edges at the center, then one edge group per
/// loop pair. `orientation` picks the half-edge recorded for a loop; the pair
/// representative is used otherwise. `st` defaults to the BFS spanning tree.
pub fn peripheral_structure(
    gog: &GraphOfGroups,
    center: VertexId,
    orientation: &[EdgeId],
    st: Option<&SpanningTree>,
    extra: &[GroupDescriptor],
) -> Result<Vec<Peripheral>, StarError> {
    gog.validate()?;
    if !gog.graph.has_vertex(center) || !touches_all(gog, center) {
        return Err(StarError::NotRelHypStar(format!("not a star centered at {center}")));
    }
    if !admits_all(gog, center) {
        return Err(StarError::NotRelHypStar(format!(
            "center group {} does not admit the edge groups",
            gog.vertex_group(center)
        )));
    }
    let default_st;
    let st = match st {
        Some(t) if gog.graph.is_spanning_tree(t) => t,
        Some(_) => return Err(GogError::InvalidSpanningTree.into()),
        None => {
            default_st = gog.graph.spanning_tree().map_err(GogError::from)?;
            &default_st
        }
    };
    let mut out: Vec<Peripheral> = extra.iter().map(|g| Peripheral { role: PeripheralRole::Given, group: g.clone() }).collect();
    for &a in &st.pairs {
        let e = if gog.graph.target(a) == center { a } else { gog.graph.reverse(a) };
        let leaf = gog.graph.source(e);
        out.push(Peripheral { role: PeripheralRole::Leaf { edge: e, vertex: leaf }, group: gog.vertex_group(leaf).clone() });
    }
    for a in gog.graph.edge_pairs() {
        if gog.graph.source(a) != center || gog.graph.target(a) != center {
            continue;
        }
        let rev = gog.graph.reverse(a);
        let e = if orientation.contains(&rev) && !orientation.contains(&a) { rev } else { a };
        out.push(Peripheral { role: PeripheralRole::Loop { edge: e }, group: gog.edge_group(e).clone() });
    }
    Ok(out)
}

/// Which of the two graphs of groups tracked by a trace a step acts on: the working
/// copy, or an auxiliary collapsed star.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    Main,
    Aux,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Operation {
    /// `aux = main` with each set collapsed to a vertex.
    Collapse { sets: Vec<BTreeSet<VertexId>> },
    /// Re-checks the Morseless-star and relative hyperbolicity hypotheses at `center`.
    ValidateStar { slot: Slot, center: VertexId },
    /// Replaces every edge group of `aux` by the trivial group.
    TrivializeAux,
    /// Replaces the groups of these edge pairs of `main` by the trivial group.
    TrivializeEdges { edges: Vec<EdgeId> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    pub operation: Operation,
    pub inputs: String,
    pub justification: String,
    /// Hash of the graph of groups the step wrote to (or inspected).
    pub output_hash: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationTrace {
    pub initial_hash: String,
    pub steps: Vec<TraceStep>,
    pub final_hash: String,
}

impl DerivationTrace {
    /// Replays the steps from `initial`, checking every recorded hash, and returns the
    /// final graph of groups.
    pub fn replay(&self, initial: &GraphOfGroups) -> Result<GraphOfGroups, StarError> {
        let mismatch = |step: usize, expected: &str, actual: String| StarError::Replay { step, expected: expected.to_string(), actual };
        if initial.content_hash() != self.initial_hash {
            return Err(mismatch(0, &self.initial_hash, initial.content_hash()));
        }
        let mut run = Runner { main: initial.clone(), aux: None, steps: Vec::new() };
        for (i, s) in self.steps.iter().enumerate() {
            let hash = run.apply(&s.operation)?;
            if hash != s.output_hash {
                return Err(mismatch(i + 1, &s.output_hash, hash));
            }
        }
        let fin = run.main.content_hash();
        if fin != self.final_hash {
            return Err(mismatch(self.steps.len() + 1, &self.final_hash, fin));
        }
        Ok(run.main)
    }
}

struct Runner {
    main: GraphOfGroups,
    aux: Option<GraphOfGroups>,
    steps: Vec<TraceStep>,
}

impl Runner {
    fn slot(&self, s: Slot) -> Result<&GraphOfGroups, StarError> {
        match s {
            Slot::Main => Ok(&self.main),
            Slot::Aux => self.aux.as_ref().ok_or_else(|| StarError::InvalidInput("no collapsed star to act on".into())),
        }
    }

    fn apply(&mut self, op: &Operation) -> Result<String, StarError> {
        match op {
            Operation::Collapse { sets } => {
                let aux = self.main.collapse_many(sets)?;
                let h = aux.content_hash();
                self.aux = Some(aux);
                Ok(h)
            }
            Operation::ValidateStar { slot, center } => {
                let g = self.slot(*slot)?;
                require_rel_hyp_star(g, *center)?;
                Ok(g.content_hash())
            }
            Operation::TrivializeAux => {
                let aux = self.slot(Slot::Aux)?.with_trivial_edges();
                let h = aux.content_hash();
                self.aux = Some(aux);
                Ok(h)
            }
            Operation::TrivializeEdges { edges } => {
                self.main = self.main.with_trivial_edges_on(&edges.iter().copied().collect())?;
                Ok(self.main.content_hash())
            }
        }
    }

    fn record(&mut self, op: Operation, inputs: String, justification: &str) -> Result<(), StarError> {
        let output_hash = self.apply(&op)?;
        self.steps.push(TraceStep { operation: op, inputs, justification: justification.to_string(), output_hash });
        Ok(())
    }

    fn finish(self, initial_hash: String) -> (GraphOfGroups, DerivationTrace) {
        let final_hash = self.main.content_hash();
        (self.main, DerivationTrace { initial_hash, steps: self.steps, final_hash })
    }
}

const JUST_STAR: &str = "Morseless star whose center is hyperbolic relative to a collection containing the edge groups";
const JUST_TRIVIALIZE: &str =
    "a relatively hyperbolic Morseless star has the same Morse boundary as the star with the same vertex groups and trivial edge groups";
const JUST_COLLAPSE: &str = "collapsing connected subgraphs does not change the fundamental group";
const JUST_BOOKKEEPING: &str = "transfer the trivialized edges of the collapsed star back to the uncollapsed graph";

/// Checks the hypotheses of the trivialization theorem at `center`.
fn require_rel_hyp_star(gog: &GraphOfGroups, center: VertexId) -> Result<StarReport, StarError> {
    let r = validate_morseless_star_at(gog, center)?;
    if !r.is_star_shape {
        return Err(StarError::HypothesisViolated {
            assumption: EDGES_TOUCH_W,
            clause: format!("some edge is not incident to {center}"),
        });
    }
    if let Some(clause) = r.edges.iter().find_map(EdgeCheck::failure) {
        return Err(StarError::HypothesisViolated { assumption: EDGE_GROUPS, clause });
    }
    if !r.center_admits_edge_groups {
        return Err(StarError::HypothesisViolated {
            assumption: RELATIVELY_HYPERBOLIC,
            clause: format!("vertex {center} ({}) is not hyperbolic relative to its edge groups", gog.vertex_group(center)),
        });
    }
    Ok(r)
}

fn all_trivial(gog: &GraphOfGroups) -> bool {
    gog.graph.edge_pairs().all(|e| gog.is_trivial_edge(e))
}

/// Replaces every edge group of a relatively hyperbolic Morseless star by the trivial
/// group. A star whose edge groups are already trivial is returned unchanged.
pub fn trivialize_star(gog: &GraphOfGroups) -> Result<(GraphOfGroups, DerivationTrace), StarError> {
    gog.validate()?;
    let initial = gog.content_hash();
    let mut run = Runner { main: gog.clone(), aux: None, steps: Vec::new() };
    if all_trivial(gog) {
        return Ok(run.finish(initial));
    }
    let candidates: Vec<VertexId> = gog.graph.vertices().filter(|&c| touches_all(gog, c)).collect();
    let center = *candidates.iter().find(|&&c| admits_all(gog, c)).or(candidates.first()).ok_or_else(|| {
        StarError::HypothesisViolated { assumption: EDGES_TOUCH_W, clause: "no vertex is incident to every edge".into() }
    })?;
    run.record(Operation::ValidateStar { slot: Slot::Main, center }, format!("center {center}"), JUST_STAR)?;
    let edges: Vec<EdgeId> = gog.graph.edge_pairs().collect();
    run.record(Operation::TrivializeEdges { edges }, format!("all edges at {center}"), JUST_TRIVIALIZE)?;
    Ok(run.finish(initial))
}

/// Reduces `gog` to the same graph with the same vertex groups and trivial edge groups,
/// one vertex of `w` at a time.
///
/// Hypotheses, checked in order: (1) every edge group is undistorted, wide and of
/// infinite index at both ends; (2) every vertex of `w` is hyperbolic relative to a
/// collection admitting its adjacent edge groups; (3) every edge touches `w`.
pub fn reduce_graph_of_groups(gog: &GraphOfGroups, w: &[VertexId]) -> Result<(GraphOfGroups, DerivationTrace), StarError> {
    gog.validate()?;
    if let Some(v) = w.iter().find(|&&v| !gog.graph.has_vertex(v)) {
        return Err(StarError::InvalidInput(format!("{v} is not a vertex")));
    }
    let ws: BTreeSet<VertexId> = w.iter().copied().collect();
    if ws.len() != w.len() {
        return Err(StarError::InvalidInput("repeated vertex in W".into()));
    }
    for e in gog.graph.edge_pairs() {
        if let Some(clause) = edge_check(gog, e).failure() {
            return Err(StarError::HypothesisViolated { assumption: EDGE_GROUPS, clause });
        }
    }
    for &v in w {
        if !admits_all(gog, v) {
            return Err(StarError::HypothesisViolated {
                assumption: RELATIVELY_HYPERBOLIC,
                clause: format!("vertex {v} ({}) is not hyperbolic relative to its adjacent edge groups", gog.vertex_group(v)),
            });
        }
    }
    if let Some(e) = gog.graph.edge_pairs().find(|&e| !ws.contains(&gog.graph.source(e)) && !ws.contains(&gog.graph.target(e))) {
        return Err(StarError::HypothesisViolated {
            assumption: EDGES_TOUCH_W,
            clause: format!("edge {e} between {} and {} has no endpoint in W", gog.graph.source(e), gog.graph.target(e)),
        });
    }

    let initial = gog.content_hash();
    let mut run = Runner { main: gog.clone(), aux: None, steps: Vec::new() };
    for &v in w {
        let sets: Vec<BTreeSet<VertexId>> = gog.graph.components_minus_vertex(v).map_err(GogError::from)?;
        run.record(Operation::Collapse { sets: sets.clone() }, format!("components of the graph minus {v}: {sets:?}"), JUST_COLLAPSE)?;
        run.record(Operation::ValidateStar { slot: Slot::Aux, center: v }, format!("center {v}"), JUST_STAR)?;
        run.record(Operation::TrivializeAux, format!("star at {v}"), JUST_TRIVIALIZE)?;
        let edges: Vec<EdgeId> = gog
            .graph
            .edge_pairs()
            .filter(|&e| gog.graph.source(e) == v || gog.graph.target(e) == v)
            .collect();
        run.record(Operation::TrivializeEdges { edges: edges.clone() }, format!("edges at {v}: {edges:?}"), JUST_BOOKKEEPING)?;
    }
    debug_assert!(all_trivial(&run.main));
    Ok(run.finish(initial))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::group::word::Letter;
    use crate::group::SymbolicKind;

    use SymbolicKind::{FiniteVolumeHyperbolic3Mfld as H, SeifertFibered as S};

    pub(crate) fn tori(pieces: &[SymbolicKind], edges: &[(VertexId, VertexId)]) -> GraphOfGroups {
        GraphOfGroups::glued_along_tori(pieces, edges).unwrap()
    }

    fn g1() -> GraphOfGroups {
        let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::ZPow(2), GroupDescriptor::ZPow(2)]);
        g.add_edge(0, 1, GroupDescriptor::Z, vec![vec![Letter::pos(1)]], vec![vec![Letter::pos(0)]]).unwrap();
        g
    }

    #[test]
    fn trivial_star_is_morseless() {
        let mut g = GraphOfGroups::with_vertices(vec![GroupDescriptor::ZPow(2), GroupDescriptor::ZPow(2)]);
        g.add_trivial_edge(0, 1).unwrap();
        let r = validate_morseless_star(&g).unwrap();
        assert!(r.is_star_shape && r.is_morseless_star, "{r:?}");
        assert_eq!(r.edges[0].undistorted, Fact::Known(true));
        let (out, trace) = trivialize_star(&g).unwrap();
        assert_eq!(out, g);
        assert!(trace.steps.is_empty());
        assert_eq!(trace.initial_hash, trace.final_hash);
    }

    #[test]
    fn cyclic_edge_group_is_not_wide() {
        let r = validate_morseless_star(&g1()).unwrap();
        assert!(r.is_star_shape && !r.is_morseless_star);
        assert!(!r.edges[0].wide && r.edges[0].infinite_index);
        assert!(r.failures[0].contains("not wide"), "{:?}", r.failures);
        let err = trivialize_star(&g1()).unwrap_err();
        assert!(matches!(&err, StarError::HypothesisViolated { assumption: 1, clause } if clause.contains("wide")), "{err}");
    }

    #[test]
    fn cusped_center_with_torus_leaves() {
        let g = tori(&[H, S, S], &[(1, 0), (2, 0)]);
        let r = validate_morseless_star(&g).unwrap();
        assert_eq!(r.center, Some(0));
        assert!(r.is_morseless_star && r.center_admits_edge_groups, "{r:?}");
        let p = r.relatively_hyperbolic.unwrap();
        assert_eq!(p.len(), 2);
        assert!(p.iter().all(|x| matches!(x.role, PeripheralRole::Leaf { .. }) && x.group.tag_name() == S.tag_name()));
        let (out, trace) = trivialize_star(&g).unwrap();
        assert!(out.graph.edge_pairs().all(|e| out.is_trivial_edge(e)));
        assert_eq!(out.vertex_group, g.vertex_group);
        assert_eq!(trace.replay(&g).unwrap(), out);
    }

    #[test]
    fn abelian_center_is_not_relatively_hyperbolic() {
        let mut g2 = GraphOfGroups::with_vertices(vec![GroupDescriptor::ZPow(3), GroupDescriptor::ZPow(3)]);
        let ab = vec![vec![Letter::pos(0)], vec![Letter::pos(1)]];
        g2.add_edge(0, 1, GroupDescriptor::ZPow(2), ab.clone(), ab).unwrap();
        let err = trivialize_star(&g2).unwrap_err();
        assert!(matches!(err, StarError::HypothesisViolated { assumption: 2, .. }), "{err}");
        assert!(matches!(peripheral_structure(&g2, 0, &[], None, &[]), Err(StarError::NotRelHypStar(_))));
    }

    #[test]
    fn peripheral_cases() {
        let h = GraphOfGroups::single(GroupDescriptor::symbolic(H));
        let a = [GroupDescriptor::ZPow(2), GroupDescriptor::ZPow(2)];
        assert_eq!(peripheral_structure(&h, 0, &[], None, &a).unwrap().len(), 2);
        let l = tori(&[H], &[(0, 0)]);
        let e = 0;
        let rev = l.graph.reverse(e);
        let p = peripheral_structure(&l, 0, &[rev], None, &[]).unwrap();
        assert_eq!(p, vec![Peripheral { role: PeripheralRole::Loop { edge: rev }, group: GroupDescriptor::ZPow(2) }]);
        let p = peripheral_structure(&l, 0, &[], None, &[]).unwrap();
        assert_eq!(p[0].role, PeripheralRole::Loop { edge: e });
    }

    #[test]
    fn reduce_jsj_graph() {
        // S - H - S - H with a loop at the last hyperbolic piece.
        let g = tori(&[S, H, S, H], &[(0, 1), (1, 2), (2, 3), (3, 3)]);
        let (out, trace) = reduce_graph_of_groups(&g, &[1, 3]).unwrap();
        assert_eq!(out.graph, g.graph);
        assert_eq!(out.vertex_group, g.vertex_group);
        assert!(out.graph.edge_pairs().all(|e| out.is_trivial_edge(e)));
        assert_eq!(trace.steps.len(), 8);
        assert_eq!(trace.replay(&g).unwrap(), out);
        let mut bad = trace.clone();
        bad.steps[3].output_hash = "0".into();
        assert!(matches!(bad.replay(&g), Err(StarError::Replay { step: 4, .. })));
        let json = serde_json::to_string(&trace).unwrap();
        assert_eq!(serde_json::from_str::<DerivationTrace>(&json).unwrap(), trace);
    }

    #[test]
    fn reduce_hypotheses_in_order() {
        let ss = tori(&[S, S], &[(0, 1)]);
        assert!(matches!(reduce_graph_of_groups(&ss, &[]), Err(StarError::HypothesisViolated { assumption: 3, .. })));
        assert!(matches!(reduce_graph_of_groups(&ss, &[0]), Err(StarError::HypothesisViolated { assumption: 2, .. })));
        assert!(matches!(reduce_graph_of_groups(&g1(), &[0]), Err(StarError::HypothesisViolated { assumption: 1, .. })));
        assert!(matches!(reduce_graph_of_groups(&ss, &[7]), Err(StarError::InvalidInput(_))));
        let star = tori(&[H, S], &[(0, 1)]);
        let (a, _) = reduce_graph_of_groups(&star, &[0]).unwrap();
        assert_eq!(a, trivialize_star(&star).unwrap().0);
    }
}
