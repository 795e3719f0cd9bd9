use std::collections::HashMap;

use serde::Serialize;

use super::{delta_m, Metric, MetricBall, MorseError, MorseGauge, PathInBall, INF};
use crate::graph::VertexId;

/// Scales used by Morse checks when no grid is given.
pub const DEFAULT_GRID: [(f64, f64); 5] = [(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (3.0, 3.0), (5.0, 0.0)];

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchOptions {
    /// Search nodes per critical value before giving up with `inconclusive`.
    pub max_nodes: u64,
    /// Stop as soon as the value is known to be at least this.
    pub stop_at: Option<u32>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { max_nodes: 50_000_000, stop_at: None }
    }
}

/// Critical value of a segment at one scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalValue {
    /// Largest deviation found; exact unless one of the flags is set.
    pub value: u32,
    /// A quasi-geodesic with endpoints on the segment realizing `value`.
    pub witness: Option<PathInBall>,
    pub lambda: f64,
    pub epsilon: f64,
    /// `⌊λ·len + ε⌋`, the longest admissible path.
    pub cap: usize,
    pub radius: u32,
    /// Some admissible path touched the ball boundary, so the true value may be larger.
    pub truncated: bool,
    /// The node budget ran out.
    pub inconclusive: bool,
    /// The search stopped once `value` reached `stop_at`.
    pub stopped_early: bool,
    pub nodes: u64,
}

fn check_constants(lambda: f64, eps: f64) -> Result<(), MorseError> {
    if !(lambda >= 1.0 && eps >= 0.0 && lambda.is_finite() && eps.is_finite()) {
        return Err(MorseError::InvalidParameter(format!("need λ ≥ 1 and ε ≥ 0, got ({lambda}, {eps})")));
    }
    Ok(())
}

fn floor_cap(x: f64) -> usize {
    (x + TOL).floor().max(0.0) as usize
}

/// `len ≤ λ·d + ε` for the step `path[i] … w` for every `i`.
fn extends_quasi_geodesically(m: &Metric, path: &[VertexId], w: VertexId, lambda: f64, eps: f64) -> bool {
    let j = path.len();
    path.iter().enumerate().all(|(i, &p)| (j - i) as f64 <= lambda * m.dist(p, w) as f64 + eps + TOL)
}

/// All shortest paths of the ball from `x` to `y`, in shortlex order of labels.
pub fn geodesics(ball: &dyn MetricBall, x: VertexId, y: VertexId) -> Result<Vec<PathInBall>, MorseError> {
    let m = Metric::new(ball);
    geodesics_in(&m, x, y)
}

pub(crate) fn geodesics_in(m: &Metric, x: VertexId, y: VertexId) -> Result<Vec<PathInBall>, MorseError> {
    for v in [x, y] {
        if !m.contains(v) {
            return Err(MorseError::NotInBall(v));
        }
    }
    let row = m.intrinsic_row(y);
    if row[x] == INF {
        return Err(MorseError::NotInBall(y));
    }
    let mut out = Vec::new();
    let mut path = vec![x];
    fn walk(m: &Metric, row: &[u32], path: &mut Vec<VertexId>, out: &mut Vec<PathInBall>) {
        let v = *path.last().unwrap();
        if row[v] == 0 {
            out.push(PathInBall::new(path.clone()));
            return;
        }
        for &(w, _) in m.neighbors(v) {
            if row[w] + 1 == row[v] {
                path.push(w);
                walk(m, row, path, out);
                path.pop();
            }
        }
    }
    walk(m, &row, &mut path, &mut out);
    Ok(out)
}

/// Lazy depth-first enumeration of `(λ, ε)`-quasi-geodesics from `x` to `y`.
pub struct QuasiGeodesics<'a> {
    m: Metric<'a>,
    y: VertexId,
    lambda: f64,
    eps: f64,
    bound: usize,
    path: Vec<VertexId>,
    cursor: Vec<usize>,
    started: bool,
}

/// Every path from `x` to `y` of length at most `cap` all of whose subpaths satisfy
/// `len ≤ λ·d(endpoints) + ε`, in deterministic depth-first order.
pub fn quasi_geodesics(
    ball: &dyn MetricBall,
    x: VertexId,
    y: VertexId,
    lambda: f64,
    eps: f64,
    cap: usize,
) -> Result<QuasiGeodesics<'_>, MorseError> {
    check_constants(lambda, eps)?;
    let m = Metric::new(ball);
    for v in [x, y] {
        if !m.contains(v) {
            return Err(MorseError::NotInBall(v));
        }
    }
    let bound = cap.min(floor_cap(lambda * m.dist(x, y) as f64 + eps));
    Ok(QuasiGeodesics { m, y, lambda, eps, bound, path: vec![x], cursor: vec![0], started: false })
}

impl QuasiGeodesics<'_> {
    fn admissible(&self, w: VertexId) -> bool {
        let j = self.path.len();
        let to_y = self.m.dist(w, self.y);
        if to_y == INF || j + to_y as usize > self.bound {
            return false;
        }
        if !extends_quasi_geodesically(&self.m, &self.path, w, self.lambda, self.eps) {
            return false;
        }
        // Every prefix start must still be able to reach y within its own budget.
        self.path.iter().chain([&w]).enumerate().all(|(i, &p)| {
            (j - i + to_y as usize) as f64 <= self.lambda * self.m.dist(p, self.y) as f64 + self.eps + TOL
        })
    }
}

impl Iterator for QuasiGeodesics<'_> {
    type Item = PathInBall;

    fn next(&mut self) -> Option<PathInBall> {
        if !self.started {
            self.started = true;
            if self.m.dist(self.path[0], self.y) as usize > self.bound {
                self.path.clear();
                self.cursor.clear();
                return None;
            }
            if self.path[0] == self.y {
                return Some(PathInBall::new(self.path.clone()));
            }
        }
        while let Some(&c) = self.cursor.last() {
            let v = *self.path.last().unwrap();
            let nbrs = self.m.neighbors(v);
            if c >= nbrs.len() {
                self.path.pop();
                self.cursor.pop();
                continue;
            }
            *self.cursor.last_mut().unwrap() += 1;
            let w = nbrs[c].0;
            if self.admissible(w) {
                self.path.push(w);
                self.cursor.push(0);
                if w == self.y {
                    return Some(PathInBall::new(self.path.clone()));
                }
            }
        }
        None
    }
}

/// Largest deviation from `seg` of a `(λ, ε)`-quasi-geodesic with endpoints on `seg`.
///
/// Branch and bound over paths starting at each segment vertex: a path with `R` steps
/// of budget left at distance `d` from the segment cannot get further than `(d + R)/2`.
pub fn critical_value(
    ball: &dyn MetricBall,
    seg: &PathInBall,
    c: (f64, f64),
    opts: SearchOptions,
) -> Result<CriticalValue, MorseError> {
    let m = Metric::new(ball);
    critical_value_in(&m, seg, c, opts)
}

struct Cv<'m, 'a> {
    m: &'m Metric<'a>,
    lambda: f64,
    eps: f64,
    seg: &'m [VertexId],
    seg_index: HashMap<VertexId, usize>,
    dseg: Vec<u32>,
    global_max: u32,
    radius: u32,
    a: usize,
    cap_a: usize,
    best: u32,
    witness: Option<PathInBall>,
    truncated: bool,
    nodes: u64,
    opts: SearchOptions,
    aborted: bool,
}

impl Cv<'_, '_> {
    fn done(&self) -> bool {
        self.aborted || self.best >= self.global_max || self.opts.stop_at.is_some_and(|s| self.best >= s)
    }

    fn feasible(&self, path: &[VertexId], w: VertexId) -> bool {
        let j = path.len();
        (self.a..self.seg.len()).any(|b| {
            let sb = self.seg[b];
            let to_b = self.m.dist(w, sb) as usize;
            j + to_b <= floor_cap(self.lambda * (b - self.a) as f64 + self.eps)
                && path.iter().enumerate().all(|(i, &p)| {
                    (j - i + to_b) as f64 <= self.lambda * self.m.dist(p, sb) as f64 + self.eps + TOL
                })
        })
    }

    fn dfs(&mut self, path: &mut Vec<VertexId>, dev: u32) {
        self.nodes += 1;
        if self.nodes > self.opts.max_nodes {
            self.aborted = true;
            return;
        }
        let p = *path.last().unwrap();
        let j = path.len() - 1;
        if self.m.ball.depth(p) >= self.radius && j + 2 + self.dseg[p] as usize <= self.cap_a {
            self.truncated = true;
        }
        let mut nbrs: Vec<(VertexId, u64)> = self.m.neighbors(p).to_vec();
        nbrs.sort_by_key(|&(w, r)| (std::cmp::Reverse(self.dseg[w]), r));
        for (w, _) in nbrs {
            if self.done() {
                return;
            }
            let dw = self.dseg[w];
            if dw == INF || j + 1 + dw as usize > self.cap_a {
                continue;
            }
            let potential = dev.max(dw).max(((dw as usize + self.cap_a - (j + 1)) / 2) as u32);
            if potential <= self.best {
                continue;
            }
            if !extends_quasi_geodesically(self.m, path, w, self.lambda, self.eps) || !self.feasible(path, w) {
                continue;
            }
            path.push(w);
            let d2 = dev.max(dw);
            if self.seg_index.get(&w).is_some_and(|&b| b >= self.a) && d2 > self.best {
                self.best = d2;
                self.witness = Some(PathInBall::new(path.clone()));
            }
            self.dfs(path, d2);
            path.pop();
        }
    }
}

pub(crate) fn critical_value_in(
    m: &Metric,
    seg: &PathInBall,
    (lambda, eps): (f64, f64),
    opts: SearchOptions,
) -> Result<CriticalValue, MorseError> {
    check_constants(lambda, eps)?;
    m.check_path(seg)?;
    let n = seg.len();
    if m.dist(seg.start(), seg.end()) as usize != n {
        return Err(MorseError::NotGeodesic);
    }
    let nv = m.num_vertices();
    let mut dseg = vec![INF; nv];
    if m.is_exact() {
        for (z, d) in dseg.iter_mut().enumerate() {
            if m.contains(z) {
                *d = seg.vertices.iter().map(|&s| m.ball.exact_distance(z, s).unwrap()).min().unwrap();
            }
        }
    } else {
        for &s in &seg.vertices {
            let row = m.intrinsic_row(s);
            for (d, &r) in dseg.iter_mut().zip(row.iter()) {
                *d = (*d).min(r);
            }
        }
    }
    let global_max = dseg.iter().copied().filter(|&d| d != INF).max().unwrap_or(0);
    let cap = floor_cap(lambda * n as f64 + eps);
    let mut cv = Cv {
        m,
        lambda,
        eps,
        seg: &seg.vertices,
        seg_index: seg.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect(),
        dseg,
        global_max,
        radius: m.ball.radius(),
        a: 0,
        cap_a: 0,
        best: 0,
        witness: Some(PathInBall::new(vec![seg.start()])),
        truncated: false,
        nodes: 0,
        opts,
        aborted: false,
    };
    for a in 0..=n {
        if cv.done() {
            break;
        }
        cv.a = a;
        cv.cap_a = floor_cap(lambda * (n - a) as f64 + eps);
        let mut path = vec![seg.vertices[a]];
        cv.dfs(&mut path, 0);
    }
    let stopped_early = !cv.aborted && cv.best < cv.global_max && opts.stop_at.is_some_and(|s| cv.best >= s);
    Ok(CriticalValue {
        value: cv.best,
        witness: cv.witness,
        lambda,
        epsilon: eps,
        cap,
        radius: cv.radius,
        truncated: cv.truncated,
        inconclusive: cv.aborted,
        stopped_early,
        nodes: cv.nodes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BadSegment {
    pub segment: PathInBall,
    pub value: CriticalValue,
}

/// Geodesic segments from the basepoint of length `1..=max_len` whose critical value at
/// `c` is at least `threshold`. When the group acts on the ball, a segment and its
/// reverse translated to the basepoint are one orbit; the shortlex-smaller label word is
/// kept. Values are lower bounds: each search stops once the threshold is reached.
pub fn find_bad_segments(
    ball: &dyn MetricBall,
    c: (f64, f64),
    threshold: u32,
    max_len: usize,
    opts: SearchOptions,
) -> Result<Vec<BadSegment>, MorseError> {
    check_constants(c.0, c.1)?;
    let m = Metric::new(ball);
    let base = ball.basepoint();
    let row = m.intrinsic_row(base);
    let mut out = Vec::new();
    for len in 1..=max_len {
        for v in (0..m.num_vertices()).filter(|&v| m.contains(v) && row[v] as usize == len) {
            if m.dist(base, v) as usize != len {
                continue;
            }
            for seg in geodesics_in(&m, base, v)? {
                let labels = m.labels(&seg);
                let reversed: Option<Vec<u64>> = labels.iter().rev().map(|&r| ball.inverse_rank(r)).collect();
                if reversed.is_some_and(|r| r < labels) {
                    continue;
                }
                let value = critical_value_in(&m, &seg, c, SearchOptions { stop_at: Some(threshold), ..opts })?;
                if value.value >= threshold {
                    out.push(BadSegment { segment: seg, value });
                }
            }
        }
    }
    Ok(out)
}

/// A split `s = a · b` at index `k` with critical values of both halves at the
/// inflated constant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Split {
    pub k: usize,
    pub a: PathInBall,
    pub b: PathInBall,
    pub value_a: CriticalValue,
    pub value_b: CriticalValue,
    /// `(3λ + 2, ε + 2)`.
    pub constant: (f64, f64),
}

/// Splits `seg` at the interior index maximizing the smaller of the two halves'
/// critical values at `(3λ + 2, ε + 2)`; ties go to the index nearest the middle, then
/// to the smaller index.
pub fn split_bad_segment(
    ball: &dyn MetricBall,
    seg: &PathInBall,
    c: (f64, f64),
    opts: SearchOptions,
) -> Result<Split, MorseError> {
    check_constants(c.0, c.1)?;
    let m = Metric::new(ball);
    m.check_path(seg)?;
    let n = seg.len();
    if m.dist(seg.start(), seg.end()) as usize != n {
        return Err(MorseError::NotGeodesic);
    }
    if n < 2 {
        return Err(MorseError::NoSplitAtScale(format!("segment of length {n} has no interior point")));
    }
    let constant = (3.0 * c.0 + 2.0, c.1 + 2.0);
    let mut best: Option<(u32, Split)> = None;
    for k in 1..n {
        let (a, b) = (seg.sub(0, k), seg.sub(k, n));
        let value_a = critical_value_in(&m, &a, constant, opts)?;
        let value_b = critical_value_in(&m, &b, constant, opts)?;
        let score = value_a.value.min(value_b.value);
        let off = |k: usize| (2 * k).abs_diff(n);
        let better = best.as_ref().map_or(true, |(s, sp)| score > *s || (score == *s && off(k) < off(sp.k)));
        if better {
            best = Some((score, Split { k, a, b, value_a, value_b, constant }));
        }
    }
    match best {
        Some((s, split)) if s >= 1 => Ok(split),
        _ => Err(MorseError::NoSplitAtScale("every split has a half with critical value 0".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub lambda: f64,
    pub epsilon: f64,
    /// `M(λ, ε)`.
    pub bound: f64,
    pub value: u32,
    pub cap: usize,
    pub truncated: bool,
    pub inconclusive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MorseVerdict {
    pub pass: bool,
    pub gauge: String,
    pub radius: u32,
    pub segment_length: usize,
    pub grid: Vec<GridPoint>,
    /// A quasi-geodesic leaving the `M(λ, ε)`-neighborhood, with its scale.
    pub witness: Option<((f64, f64), PathInBall)>,
}

/// Checks `critical_value(seg, (λ, ε)) ≤ M(λ, ε)` on every grid point.
pub fn is_morse_at_scale(
    ball: &dyn MetricBall,
    seg: &PathInBall,
    gauge: &MorseGauge,
    grid: &[(f64, f64)],
    opts: SearchOptions,
) -> Result<MorseVerdict, MorseError> {
    let m = Metric::new(ball);
    let mut verdict = MorseVerdict {
        pass: true,
        gauge: gauge.to_string(),
        radius: ball.radius(),
        segment_length: seg.len(),
        grid: Vec::new(),
        witness: None,
    };
    for &(lambda, eps) in grid {
        let bound = gauge.eval(lambda, eps);
        let stop_at = Some((bound + TOL).floor() as u32 + 1);
        let cv = critical_value_in(&m, seg, (lambda, eps), SearchOptions { stop_at, ..opts })?;
        let fail = cv.value as f64 > bound + TOL;
        verdict.grid.push(GridPoint {
            lambda,
            epsilon: eps,
            bound,
            value: cv.value,
            cap: cv.cap,
            truncated: cv.truncated,
            inconclusive: cv.inconclusive,
        });
        if fail && verdict.pass {
            verdict.pass = false;
            verdict.witness = cv.witness.map(|w| ((lambda, eps), w));
        }
    }
    Ok(verdict)
}

/// `η ∈ O_n(ξ)`: `d(η(t), ξ(t)) < δ_M` for every integer `t ≤ n`.
pub fn neighborhood_member(
    ball: &dyn MetricBall,
    xi: &PathInBall,
    eta: &PathInBall,
    n: usize,
    gauge: &MorseGauge,
) -> Result<bool, MorseError> {
    let m = Metric::new(ball);
    m.check_path(xi)?;
    m.check_path(eta)?;
    if xi.start() != eta.start() {
        return Err(MorseError::BadBasepoint(xi.start(), eta.start()));
    }
    if n > xi.len().min(eta.len()) {
        return Err(MorseError::InvalidParameter(format!("n = {n} exceeds a path length")));
    }
    Ok(pointwise_close(&m, xi, eta, n, delta_m(gauge)))
}

/// `d(η(t), ξ(t)) < δ` for `t ≤ n`, paths held constant after their ends.
pub(crate) fn pointwise_close(m: &Metric, xi: &PathInBall, eta: &PathInBall, n: usize, delta: f64) -> bool {
    (0..=n).all(|t| (m.dist(xi.at(t), eta.at(t)) as f64) < delta)
}
