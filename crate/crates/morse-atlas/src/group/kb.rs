//! Curated group properties and declared embedding facts.

use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use super::cayley::sphere_sizes;
use super::descriptor::GroupDescriptor;
use super::snf::smith_diagonal;
use super::word::{exponent_sums, Word};
use super::GroupError;
use crate::boundary::{normalize, BoundaryType, Factor, FactorMultiset};

/// A property value with its epistemic status.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fact<T> {
    Known(T),
    /// Inferred from a finite ball of the given radius.
    Estimated { value: T, radius: u32 },
    Unknown,
}

impl<T: Clone> Fact<T> {
    pub fn known(&self) -> Option<T> {
        match self {
            Fact::Known(v) => Some(v.clone()),
            _ => None,
        }
    }

    pub fn is_known(&self) -> bool {
        matches!(self, Fact::Known(_))
    }
}

impl Fact<bool> {
    pub fn is_true(&self) -> bool {
        matches!(self, Fact::Known(true))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupProperties {
    pub is_infinite: Fact<bool>,
    pub is_virtually_cyclic: Fact<bool>,
    pub is_hyperbolic: Fact<bool>,
    pub is_wide: Fact<bool>,
    pub has_empty_morse_boundary: Fact<bool>,
    pub morse_boundary: Fact<BoundaryType>,
    /// Tags of the subgroups the group is hyperbolic relative to.
    pub relative_peripheral_kinds: Vec<String>,
}

impl GroupProperties {
    fn unknown() -> Self {
        GroupProperties {
            is_infinite: Fact::Unknown,
            is_virtually_cyclic: Fact::Unknown,
            is_hyperbolic: Fact::Unknown,
            is_wide: Fact::Unknown,
            has_empty_morse_boundary: Fact::Unknown,
            morse_boundary: Fact::Unknown,
            relative_peripheral_kinds: Vec::new(),
        }
    }

    fn from_row(row: &KbRow) -> Self {
        GroupProperties {
            is_infinite: Fact::Known(row.infinite),
            is_virtually_cyclic: Fact::Known(row.virtually_cyclic),
            is_hyperbolic: Fact::Known(row.hyperbolic),
            is_wide: Fact::Known(row.wide),
            has_empty_morse_boundary: Fact::Known(row.morse_boundary == BoundaryType::Empty),
            morse_boundary: Fact::Known(row.morse_boundary),
            relative_peripheral_kinds: row.peripherals.clone(),
        }
    }

    /// Whether every field needed for classification is exactly known.
    pub fn fully_known(&self) -> bool {
        self.is_infinite.is_known()
            && self.is_virtually_cyclic.is_known()
            && self.is_hyperbolic.is_known()
            && self.morse_boundary.is_known()
    }
}

#[derive(Debug, Clone, Deserialize)]
struct KbRow {
    tag: String,
    infinite: bool,
    virtually_cyclic: bool,
    hyperbolic: bool,
    wide: bool,
    #[serde(deserialize_with = "boundary_by_name")]
    morse_boundary: BoundaryType,
    peripherals: Vec<String>,
    #[allow(dead_code)]
    note: String,
}

#[derive(Debug, Clone, Deserialize)]
struct EmbeddingRow {
    edge: String,
    vertex: String,
    undistorted: bool,
    infinite_index: Option<bool>,
    note: String,
}

#[derive(Debug, Clone, Deserialize)]
struct KbFile {
    version: u32,
    groups: Vec<KbRow>,
    embeddings: Vec<EmbeddingRow>,
}

fn boundary_by_name<'de, D: serde::Deserializer<'de>>(d: D) -> Result<BoundaryType, D::Error> {
    let s = String::deserialize(d)?;
    BoundaryType::from_name(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown boundary type {s}")))
}

pub const KB_VERSION: u32 = 1;

static KB: Lazy<KbFile> = Lazy::new(|| {
    let kb: KbFile = serde_json::from_str(include_str!("../../data/group_kb.json")).expect("group KB parses");
    assert_eq!(kb.version, KB_VERSION, "group KB version");
    kb
});

fn row(tag: &str) -> Option<&'static KbRow> {
    KB.groups.iter().find(|r| r.tag == tag)
}

/// Table lookup for built-in and symbolic tags; partial facts for presentations.
pub fn properties_of(d: &GroupDescriptor) -> GroupProperties {
    match d {
        GroupDescriptor::FiniteCyclic(1) => GroupProperties::from_row(row("Trivial").unwrap()),
        GroupDescriptor::Presentation(p) => presentation_properties(p),
        _ => GroupProperties::from_row(row(d.tag_name()).expect("every tag has a KB row")),
    }
}

const GROWTH_RADIUS: u32 = 10;
const GROWTH_CAP: usize = 50_000;

fn presentation_properties(p: &super::descriptor::Presentation) -> GroupProperties {
    if let Some(factors) = p.recognize_free_factors() {
        let nontrivial: Vec<&GroupDescriptor> =
            factors.iter().map(|(d, _)| d).filter(|d| !d.is_trivial_tag()).collect();
        match nontrivial.as_slice() {
            [] => return properties_of(&GroupDescriptor::Trivial),
            [one] => return properties_of(one),
            many => {
                let fs = FactorMultiset::new(many.iter().map(|d| factor_of(d).expect("built-in")).collect());
                let boundary = normalize(&fs).map(|n| n.result);
                let vc = many.len() == 2 && many.iter().all(|d| **d == GroupDescriptor::FiniteCyclic(2));
                let hyp = many.iter().all(|d| properties_of(d).is_hyperbolic.is_true());
                return GroupProperties {
                    is_infinite: Fact::Known(true),
                    is_virtually_cyclic: Fact::Known(vc),
                    is_hyperbolic: Fact::Known(hyp),
                    is_wide: Fact::Known(false),
                    has_empty_morse_boundary: boundary
                        .as_ref()
                        .map_or(Fact::Unknown, |b| Fact::Known(*b == BoundaryType::Empty)),
                    morse_boundary: boundary.map_or(Fact::Unknown, Fact::Known),
                    relative_peripheral_kinds: Vec::new(),
                };
            }
        }
    }
    let mut props = GroupProperties::unknown();
    if p.relators_complete {
        if let Ok(ab) = p.abelianization() {
            if ab.free_rank > 0 {
                props.is_infinite = Fact::Known(true);
                return props;
            }
        }
    }
    if let Ok(nf) = GroupDescriptor::Presentation(p.clone()).normal_form() {
        if let Ok(spheres) = sphere_sizes(&nf, GROWTH_RADIUS, GROWTH_CAP) {
            if spheres.last() == Some(&0) {
                // The ball stopped growing: the group is finite.
                return GroupProperties::from_row(row("Trivial").unwrap());
            }
            props.is_infinite = Fact::Estimated { value: true, radius: spheres.len() as u32 - 1 };
        }
    }
    props
}

/// The free-product factor view of a descriptor, refusing anything not exactly known.
pub fn factor_of(d: &GroupDescriptor) -> Result<Factor, GroupError> {
    let p = properties_of(d);
    let label = d.to_string();
    if !p.fully_known() {
        return Err(GroupError::RefusesEstimate(label));
    }
    if !p.is_infinite.is_true() {
        let order = match d {
            GroupDescriptor::Trivial => 1,
            GroupDescriptor::FiniteCyclic(n) => *n as u64,
            _ => return Err(GroupError::RefusesEstimate(format!("{label}: finite of unknown order"))),
        };
        return Ok(Factor::finite(label, order));
    }
    Ok(Factor::infinite(
        label,
        p.morse_boundary.known().unwrap(),
        p.is_virtually_cyclic.is_true(),
        p.is_hyperbolic.is_true(),
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingFacts {
    pub undistorted: Fact<bool>,
    pub infinite_index: Fact<bool>,
    pub note: String,
}

/// Facts about the image of `edge` in `vertex` under the given generator images.
/// Undistortedness is always a declared table fact; the index is computed when the
/// groups are abelian or free, and read from the table otherwise.
pub fn embedding_facts(edge: &GroupDescriptor, vertex: &GroupDescriptor, images: &[Word]) -> EmbeddingFacts {
    let declared = KB.embeddings.iter().find(|r| {
        (r.edge == edge.tag_name() || (r.edge == "Trivial" && edge.is_trivial_tag()))
            && (r.vertex == "*" || r.vertex == vertex.tag_name())
    });
    let undistorted = declared.map_or(Fact::Unknown, |r| Fact::Known(r.undistorted));
    let note = declared.map_or_else(|| "no declared embedding fact".to_string(), |r| r.note.clone());
    let vprops = properties_of(vertex);
    let computed = if edge.is_trivial_tag() {
        vprops.is_infinite.known()
    } else if vprops.is_infinite.known() == Some(false) {
        Some(false)
    } else {
        match (edge, vertex) {
            (GroupDescriptor::Z | GroupDescriptor::ZPow(_), GroupDescriptor::Z | GroupDescriptor::ZPow(_)) => {
                let n = vertex.rank();
                let rows: Vec<Vec<i64>> = images.iter().map(|w| exponent_sums(w, n)).collect();
                smith_diagonal(&rows).ok().map(|d| d.iter().filter(|&&x| x != 0).count() < n)
            }
            (GroupDescriptor::Z, GroupDescriptor::Free(_)) => Some(true),
            _ => None,
        }
    };
    let infinite_index = match (computed, declared.and_then(|r| r.infinite_index)) {
        (Some(v), _) | (None, Some(v)) => Fact::Known(v),
        (None, None) => Fact::Unknown,
    };
    EmbeddingFacts { undistorted, infinite_index, note }
}

/// Whether `vertex` is declared hyperbolic relative to a collection that may contain
/// subgroups isomorphic to `edge`.
pub fn admits_peripheral(vertex: &GroupDescriptor, edge: &GroupDescriptor) -> bool {
    edge.is_trivial_tag() || properties_of(vertex).relative_peripheral_kinds.iter().any(|k| k == edge.tag_name())
}
