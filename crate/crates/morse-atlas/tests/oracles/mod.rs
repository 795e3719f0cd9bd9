//! Brute-force oracles shared by the integration tests. None of them calls into the
//! library's algorithms: each recomputes its answer from first principles.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use morse_atlas::group::Word;

// ---------------------------------------------------------------- abelianization

/// Exact determinant by fraction-free elimination.
pub fn det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a = m.to_vec();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return 0 };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Exponent-sum matrix, one row per relator.
pub fn relation_matrix(rank: usize, relators: &[Word]) -> Vec<Vec<i128>> {
    relators
        .iter()
        .map(|r| {
            let mut row = vec![0i128; rank];
            for l in r {
                row[l.gen as usize] += if l.inv { -1 } else { 1 };
            }
            row
        })
        .collect()
}

/// `(free rank, torsion)` from determinantal divisors: `d_k` is the gcd of all `k × k`
/// minors and the invariant factors are `d_k / d_{k-1}`.
pub fn abelianization_by_minors(rank: usize, relators: &[Word]) -> (usize, Vec<u64>) {
    let m = relation_matrix(rank, relators);
    let rows = m.len();
    let mut divisors = vec![1i128];
    for k in 1..=rows.min(rank) {
        let mut d = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(rank, k) {
                let minor: Vec<Vec<i128>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                d = gcd(d, det(&minor));
            }
        }
        if d == 0 {
            break;
        }
        divisors.push(d);
    }
    let r = divisors.len() - 1;
    let torsion = divisors.windows(2).map(|w| (w[1] / w[0]) as u64).filter(|&t| t > 1).collect();
    (rank - r, torsion)
}

// ---------------------------------------------------------------- metrics

pub type Z2 = (i32, i32);

pub fn z2_dist(a: &Z2, b: &Z2) -> u32 {
    (a.0 - b.0).unsigned_abs() + (a.1 - b.1).unsigned_abs()
}

pub fn z2_neighbors(p: &Z2) -> Vec<Z2> {
    vec![(p.0 + 1, p.1), (p.0 - 1, p.1), (p.0, p.1 + 1), (p.0, p.1 - 1)]
}

/// Free group elements as reduced words over `±1, ±2, …`.
pub type FreeWord = Vec<i8>;

pub fn free_mul(u: &[i8], v: &[i8]) -> FreeWord {
    let mut out = u.to_vec();
    for &x in v {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn free_inv(u: &[i8]) -> FreeWord {
    u.iter().rev().map(|x| -x).collect()
}

pub fn free_dist(u: &[i8], v: &[i8]) -> u32 {
    free_mul(&free_inv(u), v).len() as u32
}

pub fn free_neighbors(u: &FreeWord, rank: i8) -> Vec<FreeWord> {
    (1..=rank).flat_map(|g| [g, -g]).map(|x| free_mul(u, &[x])).collect()
}

// ---------------------------------------------------------------- critical values

/// Largest distance from `seg` reached by a path that starts and ends on `seg`, stays
/// in the ball and satisfies `j - i ≤ λ·d(p_i, p_j) + ε` for all `i < j`.
///
/// Plain depth-first enumeration. A path ending on `seg` has at most
/// `λ·max d(p_0, seg point) + ε` steps, which bounds the search.
pub fn critical_value_bruteforce<P: Clone + Eq + std::hash::Hash>(
    seg: &[P],
    lambda: f64,
    eps: f64,
    neighbors: &dyn Fn(&P) -> Vec<P>,
    dist: &dyn Fn(&P, &P) -> u32,
    in_ball: &dyn Fn(&P) -> bool,
) -> u32 {
    let on_seg: HashSet<P> = seg.iter().cloned().collect();
    let dseg = |p: &P| seg.iter().map(|s| dist(p, s)).min().unwrap();
    let mut best = 0;
    for s in seg {
        let cap = (lambda * seg.iter().map(|t| dist(s, t)).max().unwrap() as f64 + eps + 1e-9).floor() as usize;
        let mut path = vec![s.clone()];
        dfs(&mut path, 0, cap, lambda, eps, &on_seg, &dseg, neighbors, dist, in_ball, &mut best);
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn dfs<P: Clone + Eq + std::hash::Hash>(
    path: &mut Vec<P>,
    dev: u32,
    cap: usize,
    lambda: f64,
    eps: f64,
    on_seg: &HashSet<P>,
    dseg: &dyn Fn(&P) -> u32,
    neighbors: &dyn Fn(&P) -> Vec<P>,
    dist: &dyn Fn(&P, &P) -> u32,
    in_ball: &dyn Fn(&P) -> bool,
    best: &mut u32,
) {
    if on_seg.contains(path.last().unwrap()) {
        *best = (*best).max(dev);
    }
    if path.len() > cap {
        return;
    }
    for w in neighbors(path.last().unwrap()) {
        if !in_ball(&w) {
            continue;
        }
        let j = path.len();
        if !path.iter().enumerate().all(|(i, p)| (j - i) as f64 <= lambda * dist(p, &w) as f64 + eps + 1e-9) {
            continue;
        }
        let d = dev.max(dseg(&w));
        path.push(w);
        dfs(path, d, cap, lambda, eps, on_seg, dseg, neighbors, dist, in_ball, best);
        path.pop();
    }
}

// ---------------------------------------------------------------- boundary rules

/// Factor kinds of free products arising from closed 3-manifolds, plus a few
/// free-product groups used as single factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Finite(u32),
    /// Infinite virtually cyclic.
    Cyclic,
    /// Closed hyperbolic: S².
    Sphere,
    /// Non-hyperbolic with empty boundary (Sol, Nil, Seifert, …).
    Empty,
    /// Cusped hyperbolic: ω-Sierpiński curve, not hyperbolic.
    Sierp,
    /// Graph manifold: ω-Cantor.
    GraphManifold,
    /// Virtually free, not virtually cyclic.
    VirtuallyFree,
    /// `π₁(H³) ∗ π₁(H³)`, hyperbolic.
    SphereSphere,
    /// `π₁(H³) ∗ Nil`.
    SphereEmpty,
    /// `π₁(H) ∗ π₁(H')` for cusped `H, H'`.
    SierpSierp,
    /// `π₁(H³) ∗ π₁(H)` for cusped `H`.
    SphereSierp,
}

pub const KINDS: [Kind; 13] = [
    Kind::Finite(1),
    Kind::Finite(2),
    Kind::Finite(3),
    Kind::Cyclic,
    Kind::Sphere,
    Kind::Empty,
    Kind::Sierp,
    Kind::GraphManifold,
    Kind::VirtuallyFree,
    Kind::SphereSphere,
    Kind::SphereEmpty,
    Kind::SierpSierp,
    Kind::SphereSierp,
];

/// Boundary names as in the classification table; `OmegaSierpinski` is factor-only.
pub fn kind_boundary(k: Kind) -> &'static str {
    match k {
        Kind::Finite(_) => "Empty",
        Kind::Cyclic => "TwoPoints",
        Kind::Sphere => "Sphere2",
        Kind::Empty => "Empty",
        Kind::Sierp => "OmegaSierpinski",
        Kind::GraphManifold => "OmegaCantor",
        Kind::VirtuallyFree => "Cantor",
        Kind::SphereSphere => "Sphere2FPSphere2",
        Kind::SphereEmpty => "Sphere2FPEmpty",
        Kind::SierpSierp => "OmegaSierpFPOmegaSierp",
        Kind::SphereSierp => "Sphere2FPOmegaSierp",
    }
}

pub fn kind_hyperbolic(k: Kind) -> bool {
    matches!(k, Kind::Finite(_) | Kind::Cyclic | Kind::Sphere | Kind::VirtuallyFree | Kind::SphereSphere)
}

pub fn kind_virtually_cyclic(k: Kind) -> bool {
    matches!(k, Kind::Finite(_) | Kind::Cyclic)
}

/// Free factors of a free-product kind.
fn kind_split(k: Kind) -> Option<[Kind; 2]> {
    match k {
        Kind::GraphManifold => Some([Kind::Empty, Kind::Empty]),
        Kind::VirtuallyFree => Some([Kind::Cyclic, Kind::Cyclic]),
        Kind::SphereSphere => Some([Kind::Sphere, Kind::Sphere]),
        Kind::SphereEmpty => Some([Kind::Sphere, Kind::Empty]),
        Kind::SierpSierp => Some([Kind::Sierp, Kind::Sierp]),
        Kind::SphereSierp => Some([Kind::Sphere, Kind::Sierp]),
        _ => None,
    }
}

/// Boundary of the free product of `kinds`, or `None` when the rules do not decide it.
///
/// Outside the two-ended and one-factor cases, explores every order of the rewriting
/// rules (split a free-product factor, drop a virtually cyclic factor, merge two equal
/// kinds, drop an empty-boundary factor while another factor is not hyperbolic) and
/// insists that all terminal multisets have the same set of kinds.
pub fn boundary_oracle(kinds: &[Kind]) -> Option<&'static str> {
    let nt: Vec<Kind> = kinds.iter().copied().filter(|&k| k != Kind::Finite(1)).collect();
    match nt.as_slice() {
        [] => return Some("Empty"),
        [k] => return (*k != Kind::Sierp).then(|| kind_boundary(*k)),
        [Kind::Finite(2), Kind::Finite(2)] => return Some("TwoPoints"),
        _ => {}
    }
    let start: BTreeMap<Kind, usize> = nt.iter().fold(BTreeMap::new(), |mut m, &k| {
        *m.entry(k).or_default() += 1;
        m
    });
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut terminal: BTreeSet<BTreeSet<Kind>> = BTreeSet::new();
    while let Some(ms) = queue.pop_front() {
        let mut next = Vec::new();
        let total: usize = ms.values().sum();
        for (&k, &n) in &ms {
            let mut without = ms.clone();
            if n == 1 {
                without.remove(&k);
            } else {
                *without.get_mut(&k).unwrap() -= 1;
            }
            if let Some(parts) = kind_split(k) {
                let mut m = without.clone();
                for p in parts {
                    *m.entry(p).or_default() += 1;
                }
                next.push(m);
            }
            if kind_virtually_cyclic(k) {
                next.push(without.clone());
            }
            if n >= 2 {
                next.push(without.clone());
            }
            let other_non_hyperbolic = without.keys().any(|&o| !kind_hyperbolic(o));
            if k == Kind::Empty && total >= 2 && other_non_hyperbolic {
                next.push(without);
            }
        }
        if next.is_empty() {
            terminal.insert(ms.keys().copied().collect());
        }
        for m in next {
            if seen.insert(m.clone()) {
                queue.push_back(m);
            }
        }
    }
    assert_eq!(terminal.len(), 1, "rules are not confluent on {kinds:?}: {terminal:?}");
    let t: Vec<Kind> = terminal.into_iter().next().unwrap().into_iter().collect();
    match t.as_slice() {
        [] => Some("Cantor"),
        [Kind::Empty] => Some("OmegaCantor"),
        [Kind::Sphere] => Some("Sphere2FPSphere2"),
        [Kind::Sierp] => Some("OmegaSierpFPOmegaSierp"),
        [Kind::Sphere, Kind::Empty] => Some("Sphere2FPEmpty"),
        [Kind::Sphere, Kind::Sierp] => Some("Sphere2FPOmegaSierp"),
        _ => None,
    }
}

pub mod gen;
pub mod space;
