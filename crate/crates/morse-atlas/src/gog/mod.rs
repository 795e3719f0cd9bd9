//! Graphs of groups: presentations of fundamental groups, collapsing connected
//! subgraphs, and finite balls in Bass–Serre spaces and trees.
//!
//! Conventions: `α⁻` is the source and `α⁺` the target of a half-edge, and the
//! injection of `α` maps edge-group generators into the vertex group at `α⁺`.

mod ball;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError, SpanningTree, VertexId};
use crate::group::word::{free_reduce, inverse, Letter, Word};
use crate::group::{embedding_facts, EmbeddingFacts, GroupDescriptor, GroupError, Presentation, SymbolicKind};

pub use ball::{bass_serre_ball, project_tree, CosetSeq, SpaceBall, SpaceEdgeLabel, TreeBall};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GogError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("vertex {0} has no group")]
    MissingVertexGroup(VertexId),
    #[error("edge {0} has no group")]
    MissingEdgeGroup(EdgeId),
    #[error("edge {0} and its reverse carry different groups")]
    EdgeGroupMismatch(EdgeId),
    #[error("bad injection on edge {edge}: {reason}")]
    BadInjection { edge: EdgeId, reason: String },
    #[error("not a spanning tree")]
    InvalidSpanningTree,
    #[error("vertex set is empty or does not induce a connected subgraph")]
    NotConnected,
    #[error("vertex sets overlap")]
    OverlappingSets,
    #[error("malformed ball: {0}")]
    MalformedBall(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphOfGroups {
    pub graph: Graph,
    pub vertex_group: BTreeMap<VertexId, GroupDescriptor>,
    /// Keyed by half-edge; both halves of a pair carry the same group.
    pub edge_group: BTreeMap<EdgeId, GroupDescriptor>,
    /// Generator images of the edge group in the vertex group at the target.
    pub injection: BTreeMap<EdgeId, Vec<Word>>,
    /// Embedding facts carried over from an earlier graph of groups, e.g. after a
    /// collapse replaced the target vertex group by a presentation.
    #[serde(default)]
    pub declared: BTreeMap<EdgeId, EmbeddingFacts>,
}

/// Generator layout of a synthesized presentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationLayout {
    pub presentation: Presentation,
    /// First generator index of each vertex group.
    pub offset: BTreeMap<VertexId, u32>,
    /// Stable letter of each off-tree edge pair, keyed by the pair representative.
    pub stable: BTreeMap<EdgeId, u32>,
}

pub(crate) fn shift(w: &[Letter], by: u32) -> Word {
    w.iter().map(|l| Letter { gen: l.gen + by, inv: l.inv }).collect()
}

/// Substitutes generator images into `w`.
pub(crate) fn substitute(w: &[Letter], images: &[Word]) -> Word {
    w.iter()
        .flat_map(|l| if l.inv { inverse(&images[l.gen as usize]) } else { images[l.gen as usize].clone() })
        .collect()
}

impl GraphOfGroups {
    /// Single vertex, no edges.
    pub fn single(g: GroupDescriptor) -> Self {
        GraphOfGroups {
            graph: Graph::with_vertices(1),
            vertex_group: BTreeMap::from([(0, g)]),
            edge_group: BTreeMap::new(),
            injection: BTreeMap::new(),
            declared: BTreeMap::new(),
        }
    }

    /// Vertices `0..n` carrying the given groups and no edges.
    pub fn with_vertices(groups: Vec<GroupDescriptor>) -> Self {
        GraphOfGroups {
            graph: Graph::with_vertices(groups.len()),
            vertex_group: groups.into_iter().enumerate().collect(),
            edge_group: BTreeMap::new(),
            injection: BTreeMap::new(),
            declared: BTreeMap::new(),
        }
    }

    /// Adds an edge `u → v` with group `h`; `into_u` and `into_v` are the images of the
    /// generators of `h` in `G_u` and `G_v`. Returns the half-edge `u → v`.
    pub fn add_edge(
        &mut self,
        u: VertexId,
        v: VertexId,
        h: GroupDescriptor,
        into_u: Vec<Word>,
        into_v: Vec<Word>,
    ) -> Result<EdgeId, GogError> {
        let (e, rev) = self.graph.add_edge_pair(u, v)?;
        self.edge_group.insert(e, h.clone());
        self.edge_group.insert(rev, h);
        self.injection.insert(e, into_v);
        self.injection.insert(rev, into_u);
        Ok(e)
    }

    /// Symbolic pieces glued along tori. Each piece is marked with a peripheral pair
    /// `m_j, l_j` per boundary torus, numbered in edge order; each torus edge maps the
    /// generators of `ℤ²` onto the marked pairs at its two ends.
    pub fn glued_along_tori(pieces: &[SymbolicKind], tori: &[(VertexId, VertexId)]) -> Result<Self, GogError> {
        let mut used = vec![0u32; pieces.len()];
        let mut ends = Vec::new();
        for &(u, v) in tori {
            for x in [u, v] {
                let n = used.get_mut(x).ok_or(GraphError::UnknownVertex(x))?;
                ends.push(*n);
                *n += 1;
            }
        }
        let groups = pieces
            .iter()
            .zip(&used)
            .map(|(&kind, &n)| GroupDescriptor::Symbolic {
                kind,
                marked: (0..n).flat_map(|j| [format!("m{j}"), format!("l{j}")]).collect(),
            })
            .collect();
        let mut g = GraphOfGroups::with_vertices(groups);
        let pair = |j: u32| vec![vec![Letter::pos(2 * j)], vec![Letter::pos(2 * j + 1)]];
        for (i, &(u, v)) in tori.iter().enumerate() {
            g.add_edge(u, v, GroupDescriptor::ZPow(2), pair(ends[2 * i]), pair(ends[2 * i + 1]))?;
        }
        Ok(g)
    }

    /// Adds an edge with trivial edge group.
    pub fn add_trivial_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GogError> {
        self.add_edge(u, v, GroupDescriptor::Trivial, vec![], vec![])
    }

    pub fn vertex_group(&self, v: VertexId) -> &GroupDescriptor {
        &self.vertex_group[&v]
    }

    pub fn edge_group(&self, e: EdgeId) -> &GroupDescriptor {
        &self.edge_group[&e]
    }

    pub fn injection(&self, e: EdgeId) -> &[Word] {
        self.injection.get(&e).map_or(&[], |w| w.as_slice())
    }

    pub fn validate(&self) -> Result<(), GogError> {
        if self.graph.num_vertices() == 0 {
            return Err(GraphError::EmptyGraph.into());
        }
        if !self.graph.is_connected() {
            return Err(GraphError::DisconnectedGraph.into());
        }
        for v in self.graph.vertices() {
            self.vertex_group.get(&v).ok_or(GogError::MissingVertexGroup(v))?.validate()?;
        }
        for (e, he) in self.graph.edges() {
            let h = self.edge_group.get(&e).ok_or(GogError::MissingEdgeGroup(e))?;
            h.validate()?;
            if self.edge_group.get(&he.reverse) != Some(h) {
                return Err(GogError::EdgeGroupMismatch(e));
            }
            let images = self.injection(e);
            let bad = |reason: String| GogError::BadInjection { edge: e, reason };
            if images.len() != h.rank() {
                return Err(bad(format!("{} images for {} generators", images.len(), h.rank())));
            }
            let rank = self.vertex_group(he.target).rank();
            if images.iter().flatten().any(|l| l.gen as usize >= rank) {
                return Err(bad("image uses a generator outside the target vertex group".into()));
            }
        }
        Ok(())
    }

    pub fn is_trivial_edge(&self, e: EdgeId) -> bool {
        self.edge_group(e).is_trivial_tag()
    }

    /// Embedding facts for the image of the edge group at the target of `e`.
    pub fn edge_facts(&self, e: EdgeId) -> EmbeddingFacts {
        if let Some(f) = self.declared.get(&e) {
            return f.clone();
        }
        let t = self.graph.target(e);
        embedding_facts(self.edge_group(e), self.vertex_group(t), self.injection(e))
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("graph of groups serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Presentation of `π₁` relative to `st`, with its generator layout.
    ///
    /// Generators are the vertex generators (vertex `v`'s generator `x` is named `x_v`)
    /// followed by one stable letter `t_α` per off-tree pair. Each pair representative `α`
    /// contributes `f_ᾱ(h) t_α f_α(h)⁻¹ t_α⁻¹` per edge-group generator `h`, with `t_α`
    /// omitted on tree edges.
    pub fn fundamental_layout(&self, st: &SpanningTree) -> Result<PresentationLayout, GogError> {
        if !self.graph.is_spanning_tree(st) {
            return Err(GogError::InvalidSpanningTree);
        }
        let mut names = Vec::new();
        let mut relators = Vec::new();
        let mut offset = BTreeMap::new();
        let mut complete = true;
        for v in self.graph.vertices() {
            let p = self.vertex_group(v).presentation();
            let off = names.len() as u32;
            offset.insert(v, off);
            names.extend(p.generators.iter().map(|n| format!("{n}_{v}")));
            relators.extend(p.relators.iter().map(|r| shift(r, off)));
            complete &= p.relators_complete;
        }
        let mut stable = BTreeMap::new();
        for a in self.graph.edge_pairs() {
            if !st.contains(&self.graph, a) {
                stable.insert(a, names.len() as u32);
                names.push(format!("t_{a}"));
            }
        }
        for a in self.graph.edge_pairs() {
            let rev = self.graph.reverse(a);
            let (src, tgt) = (self.graph.source(a), self.graph.target(a));
            let t = stable.get(&a).map(|&g| Letter::pos(g));
            for (hp, hm) in self.injection(a).iter().zip(self.injection(rev)) {
                let mut r = shift(hm, offset[&src]);
                r.extend(t);
                r.extend(inverse(&shift(hp, offset[&tgt])));
                r.extend(t.map(Letter::inverse));
                relators.push(free_reduce(&r));
            }
        }
        let mut presentation = Presentation::new(names, relators);
        presentation.relators_complete = complete;
        Ok(PresentationLayout { presentation, offset, stable })
    }

    pub fn fundamental_presentation(&self, st: &SpanningTree) -> Result<Presentation, GogError> {
        Ok(self.fundamental_layout(st)?.presentation)
    }

    /// Restriction to the subgraph induced by `ys`.
    pub fn restrict(&self, ys: &BTreeSet<VertexId>) -> Result<GraphOfGroups, GogError> {
        let graph = self.graph.induced_subgraph(ys)?;
        let keep_e = |e: &EdgeId| graph.has_edge(*e);
        Ok(GraphOfGroups {
            vertex_group: self.vertex_group.iter().filter(|(v, _)| ys.contains(v)).map(|(&v, g)| (v, g.clone())).collect(),
            edge_group: self.edge_group.iter().filter(|(e, _)| keep_e(e)).map(|(&e, g)| (e, g.clone())).collect(),
            injection: self.injection.iter().filter(|(e, _)| keep_e(e)).map(|(&e, w)| (e, w.clone())).collect(),
            declared: self.declared.iter().filter(|(e, _)| keep_e(e)).map(|(&e, f)| (e, f.clone())).collect(),
            graph,
        })
    }

    /// Collapses the connected vertex set `ys` to its least vertex, whose group becomes
    /// the fundamental group of the restriction (BFS spanning tree). Edges leaving `ys`
    /// keep their ids; their injections are rewritten into the new generators.
    pub fn collapse(&self, ys: &BTreeSet<VertexId>) -> Result<GraphOfGroups, GogError> {
        if !ys.iter().all(|&v| self.graph.has_vertex(v)) || !self.graph.is_connected_subset(ys) {
            return Err(GogError::NotConnected);
        }
        // A single vertex is already collapsed unless it carries loops, which become part of its group.
        if ys.len() == 1 && !self.graph.edge_pairs().any(|e| ys.contains(&self.graph.source(e)) && ys.contains(&self.graph.target(e))) {
            return Ok(self.clone());
        }
        let y = *ys.first().unwrap();
        let sub = self.restrict(ys)?;
        let layout = sub.fundamental_layout(&sub.graph.spanning_tree()?)?;
        let mut out = GraphOfGroups {
            graph: Graph::new(),
            vertex_group: BTreeMap::new(),
            edge_group: BTreeMap::new(),
            injection: BTreeMap::new(),
            declared: BTreeMap::new(),
        };
        for v in self.graph.vertices().filter(|v| !ys.contains(v) || *v == y) {
            out.graph.add_vertex(v)?;
            let g = if v == y { GroupDescriptor::Presentation(layout.presentation.clone()) } else { self.vertex_group(v).clone() };
            out.vertex_group.insert(v, g);
        }
        let image = |v: VertexId| if ys.contains(&v) { y } else { v };
        for a in self.graph.edge_pairs() {
            let rev = self.graph.reverse(a);
            let (s, t) = (self.graph.source(a), self.graph.target(a));
            if ys.contains(&s) && ys.contains(&t) {
                continue;
            }
            out.graph.add_edge_pair_with_ids(a, rev, image(s), image(t))?;
            for e in [a, rev] {
                out.edge_group.insert(e, self.edge_group(e).clone());
                let tgt = self.graph.target(e);
                let images = self.injection(e);
                if ys.contains(&tgt) {
                    out.injection.insert(e, images.iter().map(|w| shift(w, layout.offset[&tgt])).collect());
                    out.declared.insert(e, self.edge_facts(e));
                } else {
                    out.injection.insert(e, images.to_vec());
                    if let Some(f) = self.declared.get(&e) {
                        out.declared.insert(e, f.clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Collapses each of the pairwise disjoint connected sets in turn.
    pub fn collapse_many(&self, sets: &[BTreeSet<VertexId>]) -> Result<GraphOfGroups, GogError> {
        let mut seen = BTreeSet::new();
        for s in sets {
            if s.iter().any(|v| !seen.insert(*v)) {
                return Err(GogError::OverlappingSets);
            }
        }
        let mut g = self.clone();
        for s in sets {
            g = g.collapse(s)?;
        }
        Ok(g)
    }

    /// The same graph with every edge group trivial and all injections empty.
    pub fn with_trivial_edges(&self) -> GraphOfGroups {
        let mut g = self.clone();
        for (e, h) in g.edge_group.iter_mut() {
            *h = GroupDescriptor::Trivial;
            g.injection.insert(*e, Vec::new());
        }
        g.declared.clear();
        g
    }

    /// Trivializes the edge pairs containing any of `edges`; other edges are untouched.
    pub fn with_trivial_edges_on(&self, edges: &BTreeSet<EdgeId>) -> Result<GraphOfGroups, GogError> {
        let mut g = self.clone();
        for &e in edges {
            if !self.graph.has_edge(e) {
                return Err(GraphError::UnknownEdge(e).into());
            }
            for h in [e, self.graph.reverse(e)] {
                g.edge_group.insert(h, GroupDescriptor::Trivial);
                g.injection.insert(h, Vec::new());
                g.declared.remove(&h);
            }
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot_with(
            |v| format!("{v}: {}", self.vertex_group(v)),
            |_| None,
            |e| Some(self.edge_group(e).to_string()),
        )
    }
}
