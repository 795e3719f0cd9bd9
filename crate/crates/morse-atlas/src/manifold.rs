//! Geometric decompositions of closed oriented 3-manifolds and the classification of
//! their Morse boundaries.
//!
//! A geometric prime contributes its group from the knowledge base. A non-geometric
//! prime is a JSJ graph of hyperbolic and Seifert-fibered pieces glued along tori: the
//! Seifert components are collapsed, the edge groups are trivialized over the hyperbolic
//! pieces, and the prime contributes the resulting free factors.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::{normalize, BoundaryError, BoundaryType, Factor, FactorMultiset, Normalization, Predicates};
use crate::gog::{GogError, GraphOfGroups};
use crate::graph::VertexId;
use crate::group::{factor_of, GroupDescriptor, GroupError, SymbolicKind};
use crate::star::{reduce_graph_of_groups, DerivationTrace, StarError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error(transparent)]
    Star(#[from] StarError),
    #[error(transparent)]
    Gog(#[from] GogError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error("invalid decomposition: {0}")]
    InvalidInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Geometry {
    S3,
    R3,
    H3,
    S2xR,
    H2xR,
    Nil,
    Sol,
    PSL2Rtilde,
}

impl Geometry {
    pub const ALL: [Geometry; 8] =
        [Geometry::S3, Geometry::R3, Geometry::H3, Geometry::S2xR, Geometry::H2xR, Geometry::Nil, Geometry::Sol, Geometry::PSL2Rtilde];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceKind {
    FiniteVolumeHyperbolic,
    SeifertFibered,
}

impl PieceKind {
    fn symbolic(self) -> SymbolicKind {
        match self {
            PieceKind::FiniteVolumeHyperbolic => SymbolicKind::FiniteVolumeHyperbolic3Mfld,
            PieceKind::SeifertFibered => SymbolicKind::SeifertFibered,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeFactor {
    /// `finite_order` is the order of `π₁` for spherical primes (1 for S³, 2 for ℝP³).
    Geometric {
        geometry: Geometry,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        finite_order: Option<u32>,
    },
    /// JSJ pieces and the tori joining them, as vertex pairs.
    NonGeometric { pieces: Vec<PieceKind>, tori: Vec<(VertexId, VertexId)> },
}

impl PrimeFactor {
    pub fn geometric(geometry: Geometry) -> Self {
        PrimeFactor::Geometric { geometry, finite_order: None }
    }

    pub fn projective_space() -> Self {
        PrimeFactor::Geometric { geometry: Geometry::S3, finite_order: Some(2) }
    }

    pub fn describe(&self) -> String {
        match self {
            PrimeFactor::Geometric { geometry, finite_order: Some(n) } if *n > 1 => format!("{geometry:?} with fundamental group of order {n}"),
            PrimeFactor::Geometric { geometry, .. } => format!("{geometry:?}"),
            PrimeFactor::NonGeometric { pieces, tori } => {
                let h = pieces.iter().filter(|&&k| k == PieceKind::FiniteVolumeHyperbolic).count();
                format!("non-geometric: {h} hyperbolic and {} Seifert-fibered pieces, {} tori", pieces.len() - h, tori.len())
            }
        }
    }

    pub fn validate(&self) -> Result<(), ManifoldError> {
        let bad = |m: String| Err(ManifoldError::InvalidInput(m));
        match self {
            PrimeFactor::Geometric { geometry, finite_order: Some(n) } => {
                if *geometry != Geometry::S3 {
                    return bad(format!("finite_order is only meaningful for S3, not {geometry:?}"));
                }
                if *n == 0 {
                    return bad("finite_order must be positive".into());
                }
                Ok(())
            }
            PrimeFactor::Geometric { .. } => Ok(()),
            PrimeFactor::NonGeometric { pieces, tori } => {
                if pieces.is_empty() {
                    return bad("non-geometric prime without pieces".into());
                }
                if tori.is_empty() {
                    return bad("a single piece without tori is geometric".into());
                }
                let g = self.to_graph_of_groups()?.0;
                g.validate()?;
                Ok(())
            }
        }
    }

    /// The JSJ graph of groups: torus edges with group `ℤ²`, and the hyperbolic pieces.
    pub fn to_graph_of_groups(&self) -> Result<(GraphOfGroups, Vec<VertexId>), ManifoldError> {
        let PrimeFactor::NonGeometric { pieces, tori } = self else {
            return Err(ManifoldError::InvalidInput("geometric primes have no JSJ graph".into()));
        };
        let kinds: Vec<SymbolicKind> = pieces.iter().map(|k| k.symbolic()).collect();
        let g = GraphOfGroups::glued_along_tori(&kinds, tori)?;
        let w = (0..pieces.len()).filter(|&v| pieces[v] == PieceKind::FiniteVolumeHyperbolic).collect();
        Ok((g, w))
    }
}

fn geometric_group(geometry: Geometry, finite_order: Option<u32>) -> GroupDescriptor {
    match geometry {
        Geometry::S3 => match finite_order.unwrap_or(1) {
            1 => GroupDescriptor::Trivial,
            n => GroupDescriptor::FiniteCyclic(n),
        },
        // A flat closed manifold group is virtually ℤ³.
        Geometry::R3 => GroupDescriptor::ZPow(3),
        Geometry::H3 => GroupDescriptor::symbolic(SymbolicKind::ClosedHyperbolic3Mfld),
        Geometry::S2xR => GroupDescriptor::symbolic(SymbolicKind::S2xR),
        Geometry::H2xR => GroupDescriptor::symbolic(SymbolicKind::H2xR),
        Geometry::Nil => GroupDescriptor::symbolic(SymbolicKind::Nil),
        Geometry::Sol => GroupDescriptor::symbolic(SymbolicKind::Sol),
        Geometry::PSL2Rtilde => GroupDescriptor::symbolic(SymbolicKind::PSL2Rtilde),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Boundary read from the knowledge base.
    GeometricLookup,
    /// Only Seifert-fibered pieces: an ω-Cantor space.
    AllSeifert,
    /// Seifert components collapsed, edge groups trivialized over the hyperbolic pieces.
    Reduction,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub description: String,
    pub group: GroupDescriptor,
    pub route: Route,
    /// Free factors the prime contributes.
    pub factors: Vec<Factor>,
    pub boundary: BoundaryType,
    /// Seifert components collapsed before the reduction.
    pub collapsed: Vec<BTreeSet<VertexId>>,
    pub reduction: Option<DerivationTrace>,
    pub notes: Vec<String>,
}

const NOTE_SIERPINSKI: &str =
    "omega-Sierpinski factors come only from finite-volume hyperbolic JSJ components; types with such factors are read as requiring one";

/// Boundary of a single prime, with the factors it contributes to a connected sum.
pub fn prime_boundary(p: &PrimeFactor) -> Result<PrimeReport, ManifoldError> {
    p.validate()?;
    let description = p.describe();
    match p {
        PrimeFactor::Geometric { geometry, finite_order } => {
            let group = geometric_group(*geometry, *finite_order);
            let factor = factor_of(&group)?;
            let boundary = normalize(&FactorMultiset::new(vec![factor.clone()]))?.result;
            Ok(PrimeReport {
                description,
                group,
                route: Route::GeometricLookup,
                factors: vec![factor],
                boundary,
                collapsed: Vec::new(),
                reduction: None,
                notes: Vec::new(),
            })
        }
        PrimeFactor::NonGeometric { tori, .. } => {
            let (gog, w) = p.to_graph_of_groups()?;
            let st = gog.graph.spanning_tree().map_err(GogError::from)?;
            let group = GroupDescriptor::Presentation(gog.fundamental_presentation(&st)?);
            if w.is_empty() {
                let f = Factor::infinite("graph manifold", BoundaryType::OmegaCantor, false, false);
                return Ok(PrimeReport {
                    description,
                    group,
                    route: Route::AllSeifert,
                    factors: vec![f],
                    boundary: BoundaryType::OmegaCantor,
                    collapsed: Vec::new(),
                    reduction: None,
                    notes: vec!["all pieces are Seifert fibered: the boundary is an omega-Cantor space".into()],
                });
            }
            let rest: BTreeSet<VertexId> = gog.graph.vertices().filter(|v| !w.contains(v)).collect();
            let comps = gog.graph.components_within(&rest);
            let collapsed = gog.collapse_many(&comps)?;
            let (reduced, trace) = reduce_graph_of_groups(&collapsed, &w)?;
            debug_assert!(reduced.graph.edge_pairs().all(|e| reduced.is_trivial_edge(e)));

            let mut factors = Vec::new();
            for v in reduced.graph.vertices() {
                if w.contains(&v) {
                    factors.push(factor_of(&GroupDescriptor::symbolic(SymbolicKind::FiniteVolumeHyperbolic3Mfld))?);
                    continue;
                }
                let comp = comps.iter().find(|c| c.contains(&v)).expect("collapsed vertex belongs to a component");
                let inner = tori.iter().filter(|(a, b)| comp.contains(a) && comp.contains(b)).count();
                if comp.len() == 1 && inner == 0 {
                    factors.push(factor_of(&GroupDescriptor::symbolic(SymbolicKind::SeifertFibered))?);
                } else {
                    factors.push(Factor::infinite(format!("Seifert component {comp:?}"), BoundaryType::OmegaCantor, false, false));
                }
            }
            // With trivial edge groups, each independent cycle of the graph adds a free ℤ factor.
            let cycles = reduced.graph.num_edge_pairs() + 1 - reduced.graph.num_vertices();
            for _ in 0..cycles {
                factors.push(factor_of(&GroupDescriptor::Z)?);
            }
            let boundary = normalize(&FactorMultiset::new(factors.clone()))?.result;
            Ok(PrimeReport {
                description,
                group,
                route: Route::Reduction,
                factors,
                boundary,
                collapsed: comps,
                reduction: Some(trace),
                notes: vec![NOTE_SIERPINSKI.into()],
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ManifoldDecomposition {
    pub primes: Vec<PrimeFactor>,
    /// Inputs are taken as oriented; pass to an orientable cover first otherwise.
    #[serde(default = "yes")]
    pub oriented: bool,
}

fn yes() -> bool {
    true
}

impl ManifoldDecomposition {
    pub fn new(primes: Vec<PrimeFactor>) -> Self {
        Self { primes, oriented: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub result: BoundaryType,
    pub row: Option<u8>,
    pub predicates: Predicates,
    pub primes: Vec<PrimeReport>,
    pub normalization: Normalization,
}

/// Morse boundary type of `π₁(M)` for `M` the connected sum of the primes.
pub fn classify(m: &ManifoldDecomposition) -> Result<Classification, ManifoldError> {
    if m.primes.is_empty() {
        return Err(ManifoldError::InvalidInput("no prime factors".into()));
    }
    if !m.oriented {
        return Err(ManifoldError::InvalidInput("non-orientable input: classify an orientable cover".into()));
    }
    let primes = m.primes.iter().map(prime_boundary).collect::<Result<Vec<_>, _>>()?;
    let factors = primes.iter().flat_map(|p| p.factors.iter().cloned()).collect();
    let normalization = normalize(&FactorMultiset::new(factors))?;
    let result = normalization.result;
    Ok(Classification { result, row: result.row(), predicates: result.predicates(), primes, normalization })
}
