//! JSON input files and their canonical form.
//!
//! Every file carries `schema_version` and a `kind`: `decomposition`,
//! `graph_of_groups` or `presentation`. Groups are `{"tag": …, "params": {…}}` and words
//! are strings over the generator names of the group they live in. The raw structs are
//! flat so that serde reports type errors at their exact line and column; semantic
//! errors name the JSON path instead.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boundary::BoundaryType;
use crate::gog::GraphOfGroups;
use crate::graph::VertexId;
use crate::group::word::{format_word, parse_word};
use crate::group::{GroupDescriptor, Presentation, RewritingSystem, SymbolicKind, Word};
use crate::manifold::{Geometry, ManifoldDecomposition, PieceKind, PrimeFactor};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("unsupported schema_version {0} (expected {SCHEMA_VERSION})")]
    SchemaVersion(u32),
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("expected a {expected} file, got {got}")]
    WrongKind { expected: &'static str, got: &'static str },
}

fn invalid(path: impl Into<String>, message: impl ToString) -> IoError {
    IoError::Invalid { path: path.into(), message: message.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Decomposition,
    GraphOfGroups,
    Presentation,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroup {
    pub tag: String,
    #[serde(default, skip_serializing_if = "RawParams::is_empty")]
    pub params: RawParams,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relators: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rules: Option<Vec<(String, String)>>,
}

impl RawParams {
    fn is_empty(&self) -> bool {
        *self == RawParams::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPrime {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geometry: Option<Geometry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite_order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pieces: Option<Vec<PieceKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tori: Option<Vec<(VertexId, VertexId)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawVertex {
    pub group: RawGroup,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawEdge {
    pub from: VertexId,
    pub to: VertexId,
    pub group: RawGroup,
    /// Images of the edge-group generators in the group at `from`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub into_from: Vec<String>,
    /// Images in the group at `to`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub into_to: Vec<String>,
}

/// The file as written. Fields not used by `kind` must be absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub schema_version: u32,
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<RawPrime>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oriented: Option<bool>,
    /// Expected classification, checked by the corpus runner.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<RawVertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<RawEdge>>,
    /// Vertex set used by `reduce`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<VertexId>>,
    /// Star center used by `validate-star`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<RawGroup>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Decomposition { manifold: ManifoldDecomposition, expected: Option<BoundaryType> },
    GraphOfGroups { gog: GraphOfGroups, w: Option<Vec<VertexId>>, center: Option<VertexId> },
    Group(GroupDescriptor),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub name: Option<String>,
    pub input: Input,
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self.input {
            Input::Decomposition { .. } => "decomposition",
            Input::GraphOfGroups { .. } => "graph_of_groups",
            Input::Group(_) => "presentation",
        }
    }

    /// The input as a graph of groups; a single group becomes a one-vertex graph.
    pub fn graph_of_groups(&self) -> Result<GraphOfGroups, IoError> {
        match &self.input {
            Input::GraphOfGroups { gog, .. } => Ok(gog.clone()),
            Input::Group(d) => Ok(GraphOfGroups::single(d.clone())),
            Input::Decomposition { .. } => Err(IoError::WrongKind { expected: "graph_of_groups", got: self.kind() }),
        }
    }

    pub fn to_raw(&self) -> RawDocument {
        let mut raw = RawDocument {
            schema_version: SCHEMA_VERSION,
            kind: Kind::Decomposition,
            name: self.name.clone(),
            primes: None,
            oriented: None,
            expected: None,
            vertices: None,
            edges: None,
            w: None,
            center: None,
            group: None,
        };
        match &self.input {
            Input::Decomposition { manifold, expected } => {
                raw.primes = Some(manifold.primes.iter().map(prime_to_raw).collect());
                raw.oriented = (!manifold.oriented).then_some(false);
                raw.expected = expected.map(|t| t.name().to_string());
            }
            Input::GraphOfGroups { gog, w, center } => {
                raw.kind = Kind::GraphOfGroups;
                raw.vertices = Some(gog.vertex_group.values().map(|g| RawVertex { group: group_to_raw(g) }).collect());
                let edges = gog
                    .graph
                    .edge_pairs()
                    .map(|e| {
                        let rev = gog.graph.reverse(e);
                        let (from, to) = (gog.graph.source(e), gog.graph.target(e));
                        let fmt = |v: VertexId, img: &[Word]| {
                            let names = gog.vertex_group(v).generator_names();
                            img.iter().map(|w| format_word(w, &names)).collect()
                        };
                        RawEdge {
                            from,
                            to,
                            group: group_to_raw(gog.edge_group(e)),
                            into_from: fmt(from, gog.injection(rev)),
                            into_to: fmt(to, gog.injection(e)),
                        }
                    })
                    .collect();
                raw.edges = Some(edges);
                raw.w = w.clone();
                raw.center = *center;
            }
            Input::Group(d) => {
                raw.kind = Kind::Presentation;
                raw.group = Some(group_to_raw(d));
            }
        }
        raw
    }

    /// Pretty JSON of the canonical form; parsing it gives back an equal document.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("raw documents serialize")
    }
}

pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let raw: RawDocument = serde_json::from_str(text)
        .map_err(|e| IoError::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    from_raw(&raw)
}

pub fn from_raw(raw: &RawDocument) -> Result<Document, IoError> {
    if raw.schema_version != SCHEMA_VERSION {
        return Err(IoError::SchemaVersion(raw.schema_version));
    }
    let forbid = |present: bool, field: &str| {
        if present {
            Err(invalid(field, format!("not allowed in a {:?} file", raw.kind)))
        } else {
            Ok(())
        }
    };
    let input = match raw.kind {
        Kind::Decomposition => {
            forbid(raw.vertices.is_some() || raw.edges.is_some(), "vertices/edges")?;
            forbid(raw.w.is_some() || raw.center.is_some() || raw.group.is_some(), "w/center/group")?;
            let primes = raw.primes.as_ref().ok_or_else(|| invalid("primes", "missing"))?;
            let primes = primes
                .iter()
                .enumerate()
                .map(|(i, p)| prime_from_raw(p, &format!("primes[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let expected = match &raw.expected {
                None => None,
                Some(s) => Some(BoundaryType::from_name(s).ok_or_else(|| invalid("expected", format!("unknown type {s:?}")))?),
            };
            let manifold = ManifoldDecomposition { primes, oriented: raw.oriented.unwrap_or(true) };
            Input::Decomposition { manifold, expected }
        }
        Kind::GraphOfGroups => {
            forbid(raw.primes.is_some() || raw.oriented.is_some() || raw.expected.is_some(), "primes/oriented/expected")?;
            forbid(raw.group.is_some(), "group")?;
            let vertices = raw.vertices.as_ref().ok_or_else(|| invalid("vertices", "missing"))?;
            let groups = vertices
                .iter()
                .enumerate()
                .map(|(i, v)| group_from_raw(&v.group, &format!("vertices[{i}].group")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut gog = GraphOfGroups::with_vertices(groups);
            for (i, e) in raw.edges.iter().flatten().enumerate() {
                let path = format!("edges[{i}]");
                let h = group_from_raw(&e.group, &format!("{path}.group"))?;
                let words = |v: VertexId, imgs: &[String], field: &str| -> Result<Vec<Word>, IoError> {
                    let g = gog.vertex_group.get(&v).ok_or_else(|| invalid(&path, format!("no vertex {v}")))?;
                    let names = g.generator_names();
                    imgs.iter()
                        .enumerate()
                        .map(|(j, s)| parse_word(s, &names).map_err(|err| invalid(format!("{path}.{field}[{j}]"), err)))
                        .collect()
                };
                let into_from = words(e.from, &e.into_from, "into_from")?;
                let into_to = words(e.to, &e.into_to, "into_to")?;
                gog.add_edge(e.from, e.to, h, into_from, into_to).map_err(|err| invalid(&path, err))?;
            }
            gog.validate().map_err(|err| invalid("edges", err))?;
            for (i, v) in raw.w.iter().flatten().chain(&raw.center).enumerate() {
                if !gog.graph.has_vertex(*v) {
                    return Err(invalid(format!("w/center[{i}]"), format!("no vertex {v}")));
                }
            }
            Input::GraphOfGroups { gog, w: raw.w.clone(), center: raw.center }
        }
        Kind::Presentation => {
            forbid(raw.primes.is_some() || raw.oriented.is_some() || raw.expected.is_some(), "primes/oriented/expected")?;
            forbid(raw.vertices.is_some() || raw.edges.is_some() || raw.w.is_some() || raw.center.is_some(), "vertices/edges/w/center")?;
            let g = raw.group.as_ref().ok_or_else(|| invalid("group", "missing"))?;
            Input::Group(group_from_raw(g, "group")?)
        }
    };
    Ok(Document { name: raw.name.clone(), input })
}

fn prime_from_raw(p: &RawPrime, path: &str) -> Result<PrimeFactor, IoError> {
    let prime = match (p.geometry, &p.pieces, &p.tori) {
        (Some(geometry), None, None) => PrimeFactor::Geometric { geometry, finite_order: p.finite_order },
        (None, Some(pieces), tori) if p.finite_order.is_none() => {
            PrimeFactor::NonGeometric { pieces: pieces.clone(), tori: tori.clone().unwrap_or_default() }
        }
        _ => return Err(invalid(path, "give either geometry (and finite_order) or pieces and tori")),
    };
    prime.validate().map_err(|e| invalid(path, e))?;
    Ok(prime)
}

fn prime_to_raw(p: &PrimeFactor) -> RawPrime {
    match p {
        PrimeFactor::Geometric { geometry, finite_order } => {
            RawPrime { geometry: Some(*geometry), finite_order: *finite_order, pieces: None, tori: None }
        }
        PrimeFactor::NonGeometric { pieces, tori } => {
            RawPrime { geometry: None, finite_order: None, pieces: Some(pieces.clone()), tori: Some(tori.clone()) }
        }
    }
}

pub fn group_from_raw(g: &RawGroup, path: &str) -> Result<GroupDescriptor, IoError> {
    let p = &g.params;
    let allowed: &[&str] = match g.tag.as_str() {
        "Trivial" | "Z" => &[],
        "FiniteCyclic" | "ZPow" => &["n"],
        "Free" => &["rank"],
        "Presentation" => &["generators", "relators", "rules"],
        _ => &["marked"],
    };
    let present = [
        ("n", p.n.is_some()),
        ("rank", p.rank.is_some()),
        ("marked", p.marked.is_some()),
        ("generators", p.generators.is_some()),
        ("relators", p.relators.is_some()),
        ("rules", p.rules.is_some()),
    ];
    if let Some((k, _)) = present.iter().find(|(k, on)| *on && !allowed.contains(k)) {
        return Err(invalid(format!("{path}.params.{k}"), format!("not a parameter of {}", g.tag)));
    }
    let need = |x: Option<u32>, k: &str| x.ok_or_else(|| invalid(format!("{path}.params.{k}"), "missing"));
    let d = match g.tag.as_str() {
        "Trivial" => GroupDescriptor::Trivial,
        "Z" => GroupDescriptor::Z,
        "FiniteCyclic" => GroupDescriptor::FiniteCyclic(need(p.n, "n")?),
        "ZPow" => GroupDescriptor::ZPow(need(p.n, "n")?),
        "Free" => GroupDescriptor::Free(need(p.rank, "rank")?),
        "Presentation" => {
            let generators = p.generators.clone().ok_or_else(|| invalid(format!("{path}.params.generators"), "missing"))?;
            let word = |s: &str, at: String| parse_word(s, &generators).map_err(|e| invalid(at, e));
            let relators = p
                .relators
                .iter()
                .flatten()
                .enumerate()
                .map(|(i, s)| word(s, format!("{path}.params.relators[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            let mut pres = Presentation::new(generators.clone(), relators);
            if let Some(rules) = &p.rules {
                let rules = rules
                    .iter()
                    .enumerate()
                    .map(|(i, (l, r))| Ok((word(l, format!("{path}.params.rules[{i}]"))?, word(r, format!("{path}.params.rules[{i}]"))?)))
                    .collect::<Result<Vec<_>, IoError>>()?;
                let sys = RewritingSystem::new(generators.len() as u32, rules).map_err(|e| invalid(format!("{path}.params.rules"), e))?;
                pres = pres.with_rewriting(sys).map_err(|e| invalid(format!("{path}.params.rules"), e))?;
            }
            GroupDescriptor::Presentation(pres)
        }
        tag => {
            let kind = SymbolicKind::from_tag_name(tag).ok_or_else(|| invalid(format!("{path}.tag"), format!("unknown tag {tag:?}")))?;
            GroupDescriptor::Symbolic { kind, marked: p.marked.clone().unwrap_or_default() }
        }
    };
    d.validate().map_err(|e| invalid(path, e))?;
    Ok(d)
}

pub fn group_to_raw(d: &GroupDescriptor) -> RawGroup {
    let mut params = RawParams::default();
    match d {
        GroupDescriptor::Trivial | GroupDescriptor::Z => {}
        GroupDescriptor::FiniteCyclic(n) | GroupDescriptor::ZPow(n) => params.n = Some(*n),
        GroupDescriptor::Free(k) => params.rank = Some(*k),
        GroupDescriptor::Symbolic { marked, .. } => params.marked = (!marked.is_empty()).then(|| marked.clone()),
        GroupDescriptor::Presentation(p) => {
            let f = |w: &Word| format_word(w, &p.generators);
            params.generators = Some(p.generators.clone());
            params.relators = Some(p.relators.iter().map(f).collect());
            params.rules = p.rewriting.as_ref().map(|s| s.rules().iter().map(|(l, r)| (f(l), f(r))).collect());
        }
    }
    RawGroup { tag: d.tag_name().to_string(), params }
}
