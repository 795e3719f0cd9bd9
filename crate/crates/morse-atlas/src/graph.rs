//! Finite graphs with paired directed edges.
//!
//! Every edge `e` has a reverse `ē` with swapped endpoints. Loops are allowed
//! (source = target) but an edge is never its own reverse.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph is disconnected")]
    DisconnectedGraph,
    #[error("graph is empty")]
    EmptyGraph,
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge {0}")]
    DuplicateEdge(EdgeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdge {
    pub source: VertexId,
    pub target: VertexId,
    pub reverse: EdgeId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "GraphRepr")]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, HalfEdge>,
    #[serde(skip)]
    out: BTreeMap<VertexId, Vec<EdgeId>>,
}

#[derive(Deserialize)]
struct GraphRepr {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, HalfEdge>,
}

impl From<GraphRepr> for Graph {
    fn from(r: GraphRepr) -> Self {
        let mut g = Graph { vertices: r.vertices, edges: r.edges, out: BTreeMap::new() };
        g.reindex();
        g
    }
}

/// A spanning tree, stored as one representative (the smaller id) per edge pair.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    pub pairs: BTreeSet<EdgeId>,
}

impl SpanningTree {
    pub fn contains(&self, g: &Graph, e: EdgeId) -> bool {
        self.pairs.contains(&g.pair_rep(e))
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices `0..n` with no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for v in 0..n {
            g.vertices.insert(v);
            g.out.insert(v, Vec::new());
        }
        g
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.vertices.insert(v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        self.out.insert(v, Vec::new());
        Ok(())
    }

    /// Adds the pair `u → v`, `v → u` with fresh ids and returns `(e, ē)`.
    pub fn add_edge_pair(&mut self, u: VertexId, v: VertexId) -> Result<(EdgeId, EdgeId), GraphError> {
        let e = self.edges.keys().next_back().map_or(0, |m| m + 1);
        self.add_edge_pair_with_ids(e, e + 1, u, v)?;
        Ok((e, e + 1))
    }

    pub fn add_edge_pair_with_ids(
        &mut self,
        e: EdgeId,
        rev: EdgeId,
        u: VertexId,
        v: VertexId,
    ) -> Result<(), GraphError> {
        for x in [u, v] {
            if !self.vertices.contains(&x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        for id in [e, rev] {
            if self.edges.contains_key(&id) {
                return Err(GraphError::DuplicateEdge(id));
            }
        }
        if e == rev {
            return Err(GraphError::DuplicateEdge(e));
        }
        self.edges.insert(e, HalfEdge { source: u, target: v, reverse: rev });
        self.edges.insert(rev, HalfEdge { source: v, target: u, reverse: e });
        self.out.entry(u).or_default().push(e);
        self.out.entry(v).or_default().push(rev);
        self.out.get_mut(&u).unwrap().sort_unstable();
        self.out.get_mut(&v).unwrap().sort_unstable();
        Ok(())
    }

    /// Rebuilds adjacency after deserialization.
    pub fn reindex(&mut self) {
        self.out = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (&id, he) in &self.edges {
            self.out.entry(he.source).or_default().push(id);
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, HalfEdge)> + '_ {
        self.edges.iter().map(|(&id, &he)| (id, he))
    }

    /// One representative per edge pair (the smaller id).
    pub fn edge_pairs(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().filter(|(&id, he)| id < he.reverse).map(|(&id, _)| id)
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Number of half-edges.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_edge_pairs(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn edge(&self, e: EdgeId) -> Option<&HalfEdge> {
        self.edges.get(&e)
    }

    pub fn source(&self, e: EdgeId) -> VertexId {
        self.edges[&e].source
    }

    pub fn target(&self, e: EdgeId) -> VertexId {
        self.edges[&e].target
    }

    pub fn reverse(&self, e: EdgeId) -> EdgeId {
        self.edges[&e].reverse
    }

    pub fn pair_rep(&self, e: EdgeId) -> EdgeId {
        e.min(self.reverse(e))
    }

    pub fn out_edges(&self, v: VertexId) -> &[EdgeId] {
        self.out.get(&v).map_or(&[], |x| x.as_slice())
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out_edges(v).iter().map(move |&e| self.edges[&e].target)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.out_edges(v).len()
    }

    /// BFS distances from `v` restricted to `allowed` (all vertices when `None`).
    pub fn distances_from(&self, v: VertexId, allowed: Option<&BTreeSet<VertexId>>) -> BTreeMap<VertexId, usize> {
        let mut dist = BTreeMap::new();
        if !self.has_vertex(v) || allowed.is_some_and(|a| !a.contains(&v)) {
            return dist;
        }
        dist.insert(v, 0);
        let mut queue = VecDeque::from([v]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for y in self.neighbors(x) {
                if allowed.is_some_and(|a| !a.contains(&y)) || dist.contains_key(&y) {
                    continue;
                }
                dist.insert(y, d + 1);
                queue.push_back(y);
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices.first() {
            None => true,
            Some(&v) => self.distances_from(v, None).len() == self.vertices.len(),
        }
    }

    /// Whether `set` induces a connected subgraph (the empty set does not).
    pub fn is_connected_subset(&self, set: &BTreeSet<VertexId>) -> bool {
        match set.first() {
            None => false,
            Some(&v) => self.distances_from(v, Some(set)).len() == set.len(),
        }
    }

    /// BFS spanning tree from the least vertex id, scanning edges in id order.
    pub fn spanning_tree(&self) -> Result<SpanningTree, GraphError> {
        let root = *self.vertices.first().ok_or(GraphError::EmptyGraph)?;
        let mut seen = BTreeSet::from([root]);
        let mut pairs = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &e in self.out_edges(x) {
                let y = self.target(e);
                if seen.insert(y) {
                    pairs.insert(self.pair_rep(e));
                    queue.push_back(y);
                }
            }
        }
        if seen.len() != self.vertices.len() {
            return Err(GraphError::DisconnectedGraph);
        }
        Ok(SpanningTree { pairs })
    }

    /// Checks that `st` is a spanning tree of this graph.
    pub fn is_spanning_tree(&self, st: &SpanningTree) -> bool {
        if self.vertices.is_empty() || st.pairs.len() + 1 != self.vertices.len() {
            return false;
        }
        let mut uf = UnionFind::new(self.vertices.iter().copied());
        for &e in &st.pairs {
            let Some(he) = self.edges.get(&e) else { return false };
            if !uf.union(he.source, he.target) {
                return false;
            }
        }
        true
    }

    pub fn induced_subgraph(&self, set: &BTreeSet<VertexId>) -> Result<Graph, GraphError> {
        if let Some(&v) = set.iter().find(|v| !self.vertices.contains(v)) {
            return Err(GraphError::UnknownVertex(v));
        }
        let mut g = Graph {
            vertices: set.clone(),
            edges: self
                .edges
                .iter()
                .filter(|(_, he)| set.contains(&he.source) && set.contains(&he.target))
                .map(|(&id, &he)| (id, he))
                .collect(),
            out: BTreeMap::new(),
        };
        g.reindex();
        Ok(g)
    }

    /// Connected components of the graph with `v` removed, sorted by least member.
    pub fn components_minus_vertex(&self, v: VertexId) -> Result<Vec<BTreeSet<VertexId>>, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        let rest: BTreeSet<VertexId> = self.vertices.iter().copied().filter(|&x| x != v).collect();
        Ok(self.components_within(&rest))
    }

    /// Connected components of the subgraph induced by `set`.
    pub fn components_within(&self, set: &BTreeSet<VertexId>) -> Vec<BTreeSet<VertexId>> {
        let mut left = set.clone();
        let mut comps = Vec::new();
        while let Some(&start) = left.first() {
            let comp: BTreeSet<VertexId> = self.distances_from(start, Some(set)).into_keys().collect();
            for x in &comp {
                left.remove(x);
            }
            comps.push(comp);
        }
        comps
    }

    /// Acyclic and connected: one fewer edge pair than vertices.
    pub fn is_tree(&self) -> bool {
        !self.vertices.is_empty() && self.num_edge_pairs() + 1 == self.num_vertices() && self.is_connected()
    }

    pub fn to_dot(&self) -> String {
        self.to_dot_with(|v| v.to_string(), |_| None, |_| None)
    }

    /// DOT export with custom vertex labels, optional vertex colors and optional edge labels.
    /// One undirected edge per pair.
    pub fn to_dot_with(
        &self,
        label: impl Fn(VertexId) -> String,
        color: impl Fn(VertexId) -> Option<String>,
        edge_label: impl Fn(EdgeId) -> Option<String>,
    ) -> String {
        let mut s = String::from("graph G {\n");
        for v in self.vertices() {
            let _ = write!(s, "  {v} [label=\"{}\"", label(v).replace('"', "\\\""));
            if let Some(c) = color(v) {
                let _ = write!(s, ", style=filled, fillcolor=\"{c}\"");
            }
            s.push_str("];\n");
        }
        for e in self.edge_pairs() {
            let he = self.edges[&e];
            let _ = write!(s, "  {} -- {}", he.source, he.target);
            if let Some(l) = edge_label(e) {
                let _ = write!(s, " [label=\"{}\"]", l.replace('"', "\\\""));
            }
            s.push_str(";\n");
        }
        s.push_str("}\n");
        s
    }
}

struct UnionFind {
    parent: BTreeMap<VertexId, VertexId>,
}

impl UnionFind {
    fn new(items: impl Iterator<Item = VertexId>) -> Self {
        Self { parent: items.map(|v| (v, v)).collect() }
    }

    fn find(&mut self, v: VertexId) -> VertexId {
        let p = self.parent[&v];
        if p == v {
            return v;
        }
        let r = self.find(p);
        self.parent.insert(v, r);
        r
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: VertexId, b: VertexId) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent.insert(ra.max(rb), ra.min(rb));
        true
    }
}
