//! The Morse boundary types of closed 3-manifold groups, their separating
//! predicates, and normalization of free-product factor lists.
//!
//! Types are closed symbols. Their topological predicates live in a pinned data
//! table; nothing here builds a topological model.

use std::collections::BTreeSet;
use std::fmt;

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundaryType {
    Empty,
    TwoPoints,
    Cantor,
    OmegaCantor,
    Sphere2,
    Sphere2FPSphere2,
    Sphere2FPEmpty,
    OmegaSierpFPOmegaSierp,
    Sphere2FPOmegaSierp,
    /// Boundary of a cusped hyperbolic 3-manifold group. Occurs only as a factor type,
    /// never as the boundary of a closed 3-manifold group.
    OmegaSierpinski,
}

/// The nine classified types, in table order.
pub const CLASSIFIED: [BoundaryType; 9] = [
    BoundaryType::Empty,
    BoundaryType::TwoPoints,
    BoundaryType::Cantor,
    BoundaryType::OmegaCantor,
    BoundaryType::Sphere2,
    BoundaryType::Sphere2FPSphere2,
    BoundaryType::Sphere2FPEmpty,
    BoundaryType::OmegaSierpFPOmegaSierp,
    BoundaryType::Sphere2FPOmegaSierp,
];

impl BoundaryType {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryType::Empty => "Empty",
            BoundaryType::TwoPoints => "TwoPoints",
            BoundaryType::Cantor => "Cantor",
            BoundaryType::OmegaCantor => "OmegaCantor",
            BoundaryType::Sphere2 => "Sphere2",
            BoundaryType::Sphere2FPSphere2 => "Sphere2FPSphere2",
            BoundaryType::Sphere2FPEmpty => "Sphere2FPEmpty",
            BoundaryType::OmegaSierpFPOmegaSierp => "OmegaSierpFPOmegaSierp",
            BoundaryType::Sphere2FPOmegaSierp => "Sphere2FPOmegaSierp",
            BoundaryType::OmegaSierpinski => "OmegaSierpinski",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        CLASSIFIED.iter().chain([&BoundaryType::OmegaSierpinski]).copied().find(|t| t.name() == s)
    }

    /// Human-readable notation, e.g. `S² ∗ ∅`.
    pub fn notation(self) -> &'static str {
        match self {
            BoundaryType::Empty => "∅",
            BoundaryType::TwoPoints => "{·,·}",
            BoundaryType::Cantor => "Cantor set",
            BoundaryType::OmegaCantor => "ω-Cantor set",
            BoundaryType::Sphere2 => "S²",
            BoundaryType::Sphere2FPSphere2 => "S² ∗ S²",
            BoundaryType::Sphere2FPEmpty => "S² ∗ ∅",
            BoundaryType::OmegaSierpFPOmegaSierp => "ω-Sierpiński ∗ ω-Sierpiński",
            BoundaryType::Sphere2FPOmegaSierp => "S² ∗ ω-Sierpiński",
            BoundaryType::OmegaSierpinski => "ω-Sierpiński curve",
        }
    }

    /// Position 1..=9 in the classification table; `None` for factor-only types.
    pub fn row(self) -> Option<u8> {
        table().row(self).row
    }

    pub fn predicates(self) -> Predicates {
        table().row(self).predicates
    }

    /// Whether the type arises as the Morse boundary of an infinitely-ended group.
    pub fn infinitely_ended(self) -> bool {
        table().row(self).infinitely_ended
    }
}

impl fmt::Display for BoundaryType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComponentKind {
    None,
    Point,
    Sphere,
    Sierpinski,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Predicates {
    pub totally_disconnected: bool,
    pub compact: bool,
    /// `None` for the empty space.
    pub connected: Option<bool>,
    pub component_kind: ComponentKind,
    pub finite: bool,
}

#[derive(Debug, Clone, Deserialize)]
struct TypeRow {
    tag: String,
    row: Option<u8>,
    #[serde(flatten)]
    predicates: Predicates,
    infinitely_ended: bool,
    #[allow(dead_code)]
    source: String,
}

#[derive(Debug, Clone, Deserialize)]
struct TableFile {
    version: u32,
    #[allow(dead_code)]
    infinitely_ended_source: String,
    types: Vec<TypeRow>,
}

pub const TABLE_VERSION: u32 = 1;

struct BoundaryTable {
    rows: Vec<(BoundaryType, TypeRow)>,
}

impl BoundaryTable {
    fn row(&self, t: BoundaryType) -> &TypeRow {
        &self.rows.iter().find(|(x, _)| *x == t).expect("table validated at load").1
    }
}

static TABLE: Lazy<Result<BoundaryTable, BoundaryError>> =
    Lazy::new(|| load_table(include_str!("../data/boundary_types.json")));

fn table() -> &'static BoundaryTable {
    TABLE.as_ref().expect("boundary type table is valid")
}

fn load_table(text: &str) -> Result<BoundaryTable, BoundaryError> {
    let file: TableFile = serde_json::from_str(text).map_err(|e| BoundaryError::InternalTableError(e.to_string()))?;
    if file.version != TABLE_VERSION {
        return Err(BoundaryError::InternalTableError(format!("unsupported table version {}", file.version)));
    }
    let mut rows = Vec::new();
    for r in file.types {
        let t = BoundaryType::from_name(&r.tag)
            .ok_or_else(|| BoundaryError::InternalTableError(format!("unknown tag {}", r.tag)))?;
        rows.push((t, r));
    }
    for t in CLASSIFIED.iter().chain([&BoundaryType::OmegaSierpinski]) {
        if rows.iter().filter(|(x, _)| x == t).count() != 1 {
            return Err(BoundaryError::InternalTableError(format!("tag {t} must appear exactly once")));
        }
    }
    Ok(BoundaryTable { rows })
}

/// Validates the shipped table: loads, and every pair of classified types is separated.
pub fn check_table() -> Result<(), BoundaryError> {
    TABLE.as_ref().map_err(|e| e.clone())?;
    distinctness_matrix().map(|_| ())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundaryError {
    #[error("boundary type table inconsistent: {0}")]
    InternalTableError(String),
    #[error("no factors given")]
    EmptyFactorList,
    #[error("unclassified combination of factor types: {0}")]
    UnclassifiedCombination(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub a: BoundaryType,
    pub b: BoundaryType,
    pub predicate: &'static str,
    pub value_a: String,
    pub value_b: String,
}

/// A separating predicate for each of the 36 unordered pairs of classified types.
pub fn distinctness_matrix() -> Result<Vec<Separation>, BoundaryError> {
    let mut out = Vec::new();
    for (i, &a) in CLASSIFIED.iter().enumerate() {
        for &b in &CLASSIFIED[i + 1..] {
            let (pa, pb) = (a.predicates(), b.predicates());
            let candidates: [(&'static str, String, String); 5] = [
                ("totally_disconnected", pa.totally_disconnected.to_string(), pb.totally_disconnected.to_string()),
                ("compact", pa.compact.to_string(), pb.compact.to_string()),
                ("connected", format!("{:?}", pa.connected), format!("{:?}", pb.connected)),
                ("component_kind", format!("{:?}", pa.component_kind), format!("{:?}", pb.component_kind)),
                ("finite", pa.finite.to_string(), pb.finite.to_string()),
            ];
            let (predicate, value_a, value_b) = candidates
                .into_iter()
                .find(|(_, x, y)| x != y)
                .ok_or_else(|| BoundaryError::InternalTableError(format!("{a} and {b} share all predicates")))?;
            out.push(Separation { a, b, predicate, value_a, value_b });
        }
    }
    Ok(out)
}

/// The separation statements the classification relies on, checked against the table.
pub fn separation_statements() -> Vec<(&'static str, bool)> {
    let p = |t: BoundaryType| t.predicates();
    let rows = |r: std::ops::RangeInclusive<usize>| CLASSIFIED[r.start() - 1..*r.end()].to_vec();
    vec![
        (
            "rows 1-4 are exactly the totally disconnected types",
            CLASSIFIED.iter().all(|&t| p(t).totally_disconnected == (t.row().unwrap() <= 4)),
        ),
        (
            "rows 5-7 are not totally disconnected and their components are spheres",
            rows(5..=7).iter().all(|&t| !p(t).totally_disconnected && p(t).component_kind == ComponentKind::Sphere),
        ),
        (
            "rows 5 and 6 are compact, row 7 is not",
            p(CLASSIFIED[4]).compact && p(CLASSIFIED[5]).compact && !p(CLASSIFIED[6]).compact,
        ),
        (
            "row 5 is connected, row 6 is not",
            p(CLASSIFIED[4]).connected == Some(true) && p(CLASSIFIED[5]).connected == Some(false),
        ),
        (
            "row 8 has Sierpinski components, row 9 also has sphere components",
            p(CLASSIFIED[7]).component_kind == ComponentKind::Sierpinski
                && p(CLASSIFIED[8]).component_kind == ComponentKind::Mixed,
        ),
    ]
}

/// One free-product factor, reduced to what normalization needs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factor {
    pub label: String,
    pub boundary: BoundaryType,
    pub virtually_cyclic: bool,
    pub hyperbolic: bool,
    /// Group order for finite factors.
    pub order: Option<u64>,
}

impl Factor {
    pub fn finite(label: impl Into<String>, order: u64) -> Self {
        Factor { label: label.into(), boundary: BoundaryType::Empty, virtually_cyclic: true, hyperbolic: true, order: Some(order) }
    }

    pub fn infinite(label: impl Into<String>, boundary: BoundaryType, virtually_cyclic: bool, hyperbolic: bool) -> Self {
        Factor { label: label.into(), boundary, virtually_cyclic, hyperbolic, order: None }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == Some(1)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorMultiset {
    pub factors: Vec<Factor>,
}

impl FactorMultiset {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    fn nontrivial(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().filter(|f| !f.is_trivial())
    }

    pub fn contains_non_hyperbolic_infinite_factor(&self) -> bool {
        self.nontrivial().any(|f| f.order.is_none() && !f.hyperbolic)
    }

    pub fn all_factors_virtually_cyclic(&self) -> bool {
        self.nontrivial().all(|f| f.virtually_cyclic)
    }

    /// False exactly for one nontrivial factor, for none, and for ℤ/2 ∗ ℤ/2.
    pub fn infinitely_ended(&self) -> bool {
        let nt: Vec<&Factor> = self.nontrivial().collect();
        !(nt.len() <= 1 || (nt.len() == 2 && nt.iter().all(|f| f.order == Some(2))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    DropTrivialFactors,
    NoFactorsLeft,
    SingleFactor,
    ProjectivePair,
    SplitFreeProductType,
    TypeSet,
    AbsorbEmpty,
    AllVirtuallyCyclic,
    SingleTypeInfinitelyEnded,
    SingleTypeDoubled,
    TypePair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub rule: Rule,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Normalization {
    pub result: BoundaryType,
    pub trace: Vec<RewriteStep>,
}

/// Constituent factor types of a free-product type, if it is one.
fn split_type(t: BoundaryType) -> Option<[(BoundaryType, bool, bool); 2]> {
    use BoundaryType::*;
    // (boundary, virtually cyclic, hyperbolic)
    let z = (TwoPoints, true, true);
    let empty = (Empty, false, false);
    let sphere = (Sphere2, false, true);
    let sierp = (OmegaSierpinski, false, false);
    match t {
        Cantor => Some([z, z]),
        OmegaCantor => Some([empty, empty]),
        Sphere2FPSphere2 => Some([sphere, sphere]),
        Sphere2FPEmpty => Some([sphere, empty]),
        OmegaSierpFPOmegaSierp => Some([sierp, sierp]),
        Sphere2FPOmegaSierp => Some([sphere, sierp]),
        _ => None,
    }
}

/// Boundary type of the free product of the given factors.
pub fn normalize(fs: &FactorMultiset) -> Result<Normalization, BoundaryError> {
    use BoundaryType::*;
    if fs.factors.is_empty() {
        return Err(BoundaryError::EmptyFactorList);
    }
    let mut trace = Vec::new();
    let mut step = |rule, detail: String| trace.push(RewriteStep { rule, detail });

    let factors: Vec<&Factor> = fs.nontrivial().collect();
    if factors.len() < fs.factors.len() {
        step(Rule::DropTrivialFactors, format!("dropped {} trivial factor(s)", fs.factors.len() - factors.len()));
    }
    if factors.is_empty() {
        step(Rule::NoFactorsLeft, "trivial group".into());
        return Ok(Normalization { result: Empty, trace });
    }
    if factors.len() == 1 {
        let f = factors[0];
        if f.boundary.row().is_none() {
            return Err(BoundaryError::UnclassifiedCombination(format!("single factor of type {}", f.boundary)));
        }
        step(Rule::SingleFactor, format!("{} has boundary {}", f.label, f.boundary));
        return Ok(Normalization { result: f.boundary, trace });
    }
    if factors.len() == 2 && factors.iter().all(|f| f.order == Some(2)) {
        step(Rule::ProjectivePair, "Z/2 * Z/2 is two-ended".into());
        return Ok(Normalization { result: TwoPoints, trace });
    }

    // Infinitely ended from here on: only the set of factor types matters.
    let mut flat: Vec<(BoundaryType, bool, bool)> = Vec::new();
    for f in &factors {
        match split_type(f.boundary) {
            Some(parts) if !f.virtually_cyclic => {
                step(
                    Rule::SplitFreeProductType,
                    format!("{} of type {} replaced by factors {} and {}", f.label, f.boundary, parts[0].0, parts[1].0),
                );
                flat.extend(parts);
            }
            _ => flat.push((f.boundary, f.virtually_cyclic, f.hyperbolic)),
        }
    }
    let mut types: BTreeSet<BoundaryType> = flat.iter().filter(|(_, vc, _)| !vc).map(|(t, _, _)| *t).collect();
    step(Rule::TypeSet, format!("types of non-virtually-cyclic factors: {}", fmt_set(&types)));
    if types.contains(&Empty) && flat.iter().any(|(t, vc, hyp)| !vc && !hyp && *t != Empty) {
        types.remove(&Empty);
        step(Rule::AbsorbEmpty, format!("empty-boundary factors absorbed by a non-hyperbolic factor: {}", fmt_set(&types)));
    }
    let result = match types.iter().copied().collect::<Vec<_>>().as_slice() {
        [] => {
            step(Rule::AllVirtuallyCyclic, "all factors virtually cyclic: virtually free".into());
            Cantor
        }
        [t] if t.infinitely_ended() => {
            step(Rule::SingleTypeInfinitelyEnded, format!("{t} is realised by an infinitely-ended group"));
            *t
        }
        [t] => {
            let doubled = match t {
                Empty => OmegaCantor,
                Sphere2 => Sphere2FPSphere2,
                OmegaSierpinski => OmegaSierpFPOmegaSierp,
                _ => return Err(BoundaryError::UnclassifiedCombination(format!("{{{t}}}"))),
            };
            step(Rule::SingleTypeDoubled, format!("{t} * {t} = {doubled}"));
            doubled
        }
        [Empty, Sphere2] => {
            step(Rule::TypePair, "{Empty, Sphere2}".into());
            Sphere2FPEmpty
        }
        [Sphere2, OmegaSierpinski] => {
            step(Rule::TypePair, "{Sphere2, OmegaSierpinski}".into());
            Sphere2FPOmegaSierp
        }
        _ => return Err(BoundaryError::UnclassifiedCombination(fmt_set(&types))),
    };
    Ok(Normalization { result, trace })
}

fn fmt_set(s: &BTreeSet<BoundaryType>) -> String {
    format!("{{{}}}", s.iter().map(|t| t.name()).collect::<Vec<_>>().join(", "))
}
