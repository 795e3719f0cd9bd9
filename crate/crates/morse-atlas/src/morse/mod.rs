//! Morse geometry at desk scale: exhaustive path searches in finite balls.
//!
//! Every "for all quasi-geodesics" quantifier is bounded by the length cap
//! `λ·d + ε` that the quasi-geodesic inequality itself forces, so results are exact
//! statements about the ball, tagged with the scale at which they hold.

mod gauge;
mod rays;
mod search;

use std::cell::RefCell;
use std::collections::{HashMap, VecDeque};
use std::rc::Rc;

use serde::Serialize;
use thiserror::Error;

pub use gauge::{delta_m, MorseGauge};
pub use rays::{
    combinatorial_neighborhood, edges_lying_on, realisation, CombinatorialRay, NeighborhoodOptions, RayKind,
    Realisation, TailSpec,
};
pub use search::{
    critical_value, find_bad_segments, geodesics, is_morse_at_scale, neighborhood_member, quasi_geodesics,
    split_bad_segment, BadSegment, CriticalValue, GridPoint, MorseVerdict, QuasiGeodesics, SearchOptions, Split,
    DEFAULT_GRID,
};

use crate::gog::{SpaceBall, SpaceEdgeLabel};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::group::CayleyBall;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MorseError {
    #[error("vertex {0} is not in the ball or not reachable inside it")]
    NotInBall(VertexId),
    #[error("path is not a geodesic of the ball")]
    NotGeodesic,
    #[error("consecutive vertices {0} and {1} are not adjacent")]
    NotAPath(VertexId, VertexId),
    #[error("paths start at different vertices {0} and {1}")]
    BadBasepoint(VertexId, VertexId),
    #[error("no admissible split: {0}")]
    NoSplitAtScale(String),
    #[error("scale mismatch: {0}")]
    ScaleMismatch(String),
    #[error("bad gauge: {0}")]
    BadGauge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid ray: {0}")]
    InvalidRay(String),
}

/// A finite ball with a basepoint, edge labels for shortlex ordering and, when the
/// ambient group has a solved word problem, the exact ambient metric.
pub trait MetricBall {
    fn graph(&self) -> &Graph;
    fn basepoint(&self) -> VertexId;
    fn radius(&self) -> u32;
    /// Distance from the basepoint.
    fn depth(&self, v: VertexId) -> u32;
    /// Rank of the label of `e`; shortlex order on paths compares these.
    fn label_rank(&self, e: EdgeId) -> u64;
    /// Rank of the inverse label, for balls where the group acts transitively on vertices.
    fn inverse_rank(&self, _rank: u64) -> Option<u64> {
        None
    }
    /// Distance in the whole space, if computable.
    fn exact_distance(&self, _u: VertexId, _v: VertexId) -> Option<u32> {
        None
    }
}

impl MetricBall for CayleyBall {
    fn graph(&self) -> &Graph {
        &self.graph
    }
    fn basepoint(&self) -> VertexId {
        self.basepoint
    }
    fn radius(&self) -> u32 {
        self.radius
    }
    fn depth(&self, v: VertexId) -> u32 {
        self.distance[v]
    }
    fn label_rank(&self, e: EdgeId) -> u64 {
        self.edge_labels[&e].index() as u64
    }
    fn inverse_rank(&self, rank: u64) -> Option<u64> {
        Some(rank ^ 1)
    }
    fn exact_distance(&self, u: VertexId, v: VertexId) -> Option<u32> {
        Some(self.word_distance(u, v))
    }
}

impl MetricBall for SpaceBall {
    fn graph(&self) -> &Graph {
        &self.graph
    }
    fn basepoint(&self) -> VertexId {
        self.basepoint
    }
    fn radius(&self) -> u32 {
        self.radius
    }
    fn depth(&self, v: VertexId) -> u32 {
        self.distance[v]
    }
    fn label_rank(&self, e: EdgeId) -> u64 {
        match self.edge_labels[&e] {
            SpaceEdgeLabel::Gen { index, inverse, .. } => 2 * index as u64 + inverse as u64,
            SpaceEdgeLabel::Edge(a) => (1 << 32) + a as u64,
        }
    }
}

/// Vertex sequence with consecutive vertices adjacent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathInBall {
    pub vertices: Vec<VertexId>,
}

impl PathInBall {
    pub fn new(vertices: Vec<VertexId>) -> Self {
        Self { vertices }
    }

    /// Checks adjacency of consecutive vertices.
    pub fn in_ball(graph: &Graph, vertices: Vec<VertexId>) -> Result<Self, MorseError> {
        if let Some(&v) = vertices.iter().find(|&&v| !graph.has_vertex(v)) {
            return Err(MorseError::NotInBall(v));
        }
        for w in vertices.windows(2) {
            if !graph.neighbors(w[0]).any(|x| x == w[1]) {
                return Err(MorseError::NotAPath(w[0], w[1]));
            }
        }
        if vertices.is_empty() {
            return Err(MorseError::InvalidParameter("empty path".into()));
        }
        Ok(Self { vertices })
    }

    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("paths are nonempty")
    }

    /// `self(t)`, constant after the end.
    pub fn at(&self, t: usize) -> VertexId {
        self.vertices[t.min(self.len())]
    }

    pub fn sub(&self, from: usize, to: usize) -> PathInBall {
        PathInBall { vertices: self.vertices[from..=to].to_vec() }
    }
}

pub(crate) const INF: u32 = u32::MAX;
const ROW_CACHE: usize = 4096;

/// Distance oracle over a ball: exact when the ball provides it, intrinsic otherwise.
pub struct Metric<'a> {
    pub ball: &'a dyn MetricBall,
    /// Neighbors in label-rank order, one entry per neighbor (least rank kept).
    adj: Vec<Vec<(VertexId, u64)>>,
    rows: RefCell<HashMap<VertexId, Rc<Vec<u32>>>>,
    pairs: RefCell<HashMap<(VertexId, VertexId), u32>>,
    exact: bool,
}

impl<'a> Metric<'a> {
    pub fn new(ball: &'a dyn MetricBall) -> Self {
        let g = ball.graph();
        let n = g.vertices().last().map_or(0, |v| v + 1);
        let mut adj = vec![Vec::new(); n];
        for v in g.vertices() {
            let mut out: Vec<(VertexId, u64)> = g
                .out_edges(v)
                .iter()
                .map(|&e| (g.target(e), ball.label_rank(e)))
                .filter(|&(w, _)| w != v)
                .collect();
            out.sort_by_key(|&(w, r)| (w, r));
            out.dedup_by_key(|x| x.0);
            out.sort_by_key(|&(w, r)| (r, w));
            adj[v] = out;
        }
        let exact = n > 0 && ball.exact_distance(ball.basepoint(), ball.basepoint()).is_some();
        Self { ball, adj, rows: RefCell::default(), pairs: RefCell::default(), exact }
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.ball.graph().has_vertex(v)
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, u64)] {
        &self.adj[v]
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// BFS distances inside the ball from `u`; `INF` where unreachable.
    pub fn intrinsic_row(&self, u: VertexId) -> Rc<Vec<u32>> {
        if let Some(r) = self.rows.borrow().get(&u) {
            return r.clone();
        }
        let mut row = vec![INF; self.adj.len()];
        row[u] = 0;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &(y, _) in &self.adj[x] {
                if row[y] == INF {
                    row[y] = row[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        let row = Rc::new(row);
        let mut rows = self.rows.borrow_mut();
        if rows.len() >= ROW_CACHE {
            rows.clear();
        }
        rows.insert(u, row.clone());
        row
    }

    pub fn dist(&self, u: VertexId, v: VertexId) -> u32 {
        if u == v {
            return 0;
        }
        if !self.exact {
            return self.intrinsic_row(u)[v];
        }
        let key = (u.min(v), u.max(v));
        if let Some(&d) = self.pairs.borrow().get(&key) {
            return d;
        }
        let d = self.ball.exact_distance(u, v).expect("exact metric");
        self.pairs.borrow_mut().insert(key, d);
        d
    }

    /// Shortlex-least geodesic of the ball from `x` to `y`.
    pub fn shortlex_geodesic(&self, x: VertexId, y: VertexId) -> Result<PathInBall, MorseError> {
        for v in [x, y] {
            if !self.contains(v) {
                return Err(MorseError::NotInBall(v));
            }
        }
        let row = self.intrinsic_row(y);
        if row[x] == INF {
            return Err(MorseError::NotInBall(y));
        }
        let mut path = vec![x];
        let mut v = x;
        while v != y {
            v = self.adj[v].iter().find(|&&(w, _)| row[w] + 1 == row[v]).expect("BFS predecessor").0;
            path.push(v);
        }
        Ok(PathInBall { vertices: path })
    }

    pub(crate) fn check_path(&self, p: &PathInBall) -> Result<(), MorseError> {
        if p.vertices.is_empty() {
            return Err(MorseError::InvalidParameter("empty path".into()));
        }
        if let Some(&v) = p.vertices.iter().find(|&&v| !self.contains(v)) {
            return Err(MorseError::NotInBall(v));
        }
        for w in p.vertices.windows(2) {
            if !self.adj[w[0]].iter().any(|&(x, _)| x == w[1]) {
                return Err(MorseError::NotAPath(w[0], w[1]));
            }
        }
        Ok(())
    }

    /// Label ranks along a path.
    pub fn labels(&self, p: &PathInBall) -> Vec<u64> {
        p.vertices
            .windows(2)
            .map(|w| self.adj[w[0]].iter().find(|&&(x, _)| x == w[1]).map_or(u64::MAX, |&(_, r)| r))
            .collect()
    }
}
