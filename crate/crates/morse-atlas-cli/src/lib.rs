//! Command runner behind the `morse-atlas` binary.
//!
//! Every command reads one input file and produces a report. Plain-text reports start
//! with a one-line verdict; `--json` emits a JSON object. Both embed the canonical form
//! of the input, so rerunning on that input reproduces the report.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use morse_atlas::boundary::BoundaryType;
use morse_atlas::gog::{bass_serre_ball, project_tree, GogError, GraphOfGroups, SpaceBall};
use morse_atlas::group::{cayley_ball, CayleyBall, GroupError, DEFAULT_MAX_CELLS, MAX_RADIUS};
use morse_atlas::io::{parse_document, Document, Input, IoError};
use morse_atlas::manifold::{classify, ManifoldError};
use morse_atlas::morse::{
    critical_value, find_bad_segments, is_morse_at_scale, Metric, MetricBall, MorseError, MorseGauge, PathInBall,
    SearchOptions, DEFAULT_GRID,
};
use morse_atlas::star::{
    build_empty_boundary_bijection, reduce_graph_of_groups, trivialize_star, validate_morseless_star,
    validate_morseless_star_at, StarError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_SCALE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "morse-atlas", version, about = "Morse boundaries of 3-manifold groups and graphs of groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Classify the Morse boundary of a decomposition.
    Classify(Common),
    /// Check whether a graph of groups is a Morseless star.
    ValidateStar(Common),
    /// Trivialize the edge groups of a Morseless star.
    Trivialize(Common),
    /// Reduce a graph of groups to trivial edge groups over the vertex set `w`.
    Reduce(Common),
    /// Build a ball in a Cayley graph or Bass-Serre space.
    Ball(Common),
    /// Critical values of axis segments in a ball.
    CriticalValues(Common),
    /// Geodesic segments whose critical value reaches the threshold.
    BadSegments(Common),
    /// Build and check the tree map to the trivial-edge graph of groups.
    CheckTreeMap(Common),
    /// Classify every decomposition in a directory and compare with `expected`.
    Corpus(Common),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Input file (a directory for `corpus`).
    pub input: PathBuf,
    #[arg(long, default_value_t = 4)]
    pub radius: u32,
    /// Morse gauge, e.g. "3*l+2*e+1".
    #[arg(long)]
    pub gauge: Option<String>,
    /// Quasi-geodesic constants "λ,ε".
    #[arg(long, default_value = "3,0")]
    pub qc: String,
    #[arg(long, default_value_t = 3)]
    pub threshold: u32,
    /// Longest segment examined; defaults to half the radius.
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub json: bool,
    /// Emit DOT instead of a report (`ball` only).
    #[arg(long)]
    pub dot: bool,
    /// Project the ball to the Bass-Serre tree (`ball` only).
    #[arg(long)]
    pub tree: bool,
    #[arg(long, env = "MORSE_ATLAS_MAX_CELLS", default_value_t = DEFAULT_MAX_CELLS)]
    pub max_cells: usize,
}

impl Common {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        Self {
            input: input.into(),
            radius: 4,
            gauge: None,
            qc: "3,0".into(),
            threshold: 3,
            max_len: None,
            json: false,
            dot: false,
            tree: false,
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::ValidateStar(_) => "validate-star",
            Command::Trivialize(_) => "trivialize",
            Command::Reduce(_) => "reduce",
            Command::Ball(_) => "ball",
            Command::CriticalValues(_) => "critical-values",
            Command::BadSegments(_) => "bad-segments",
            Command::CheckTreeMap(_) => "check-tree-map",
            Command::Corpus(_) => "corpus",
        }
    }

    pub fn options(&self) -> &Common {
        match self {
            Command::Classify(c)
            | Command::ValidateStar(c)
            | Command::Trivialize(c)
            | Command::Reduce(c)
            | Command::Ball(c)
            | Command::CriticalValues(c)
            | Command::BadSegments(c)
            | Command::CheckTreeMap(c)
            | Command::Corpus(c) => c,
        }
    }
}

/// Outcome of a command: exit code and the text to print.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

/// A failure with its exit code.
#[derive(Debug, Clone)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn new(code: i32, message: impl ToString) -> Self {
        Self { code, message: message.to_string() }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::new(EXIT_ERROR, e)
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        let code = if matches!(e, GroupError::BallTooLarge { .. }) { EXIT_SCALE } else { EXIT_ERROR };
        Failure::new(code, e)
    }
}

impl From<GogError> for Failure {
    fn from(e: GogError) -> Self {
        match e {
            GogError::Group(g) => g.into(),
            e => Failure::new(EXIT_ERROR, e),
        }
    }
}

impl From<StarError> for Failure {
    fn from(e: StarError) -> Self {
        match e {
            StarError::Gog(g) => g.into(),
            StarError::HypothesisViolated { .. } | StarError::NotRelHypStar(_) | StarError::WrongCase(_) => {
                Failure::new(EXIT_HYPOTHESIS, e)
            }
            StarError::ScaleExceeded(_) => Failure::new(EXIT_SCALE, e),
            e => Failure::new(EXIT_ERROR, e),
        }
    }
}

impl From<ManifoldError> for Failure {
    fn from(e: ManifoldError) -> Self {
        match e {
            ManifoldError::Star(s) => s.into(),
            ManifoldError::Gog(g) => g.into(),
            e => Failure::new(EXIT_ERROR, e),
        }
    }
}

impl From<MorseError> for Failure {
    fn from(e: MorseError) -> Self {
        let code = if matches!(e, MorseError::ScaleMismatch(_) | MorseError::NotInBall(_)) { EXIT_SCALE } else { EXIT_ERROR };
        Failure::new(code, e)
    }
}

/// A report: the verdict line, text details and a JSON body.
struct Report {
    verdict: String,
    lines: Vec<String>,
    body: Value,
    code: i32,
}

impl Report {
    fn new(verdict: impl Into<String>, body: Value) -> Self {
        Self { verdict: verdict.into(), lines: Vec::new(), body, code: EXIT_OK }
    }

    fn line(mut self, s: impl Into<String>) -> Self {
        self.lines.push(s.into());
        self
    }

    fn render(self, command: &str, opts: &Common, doc: Option<&Document>) -> Outcome {
        let input = doc.map(|d| serde_json::to_value(d.to_raw()).expect("raw documents serialize"));
        let output = if opts.json {
            let mut v = json!({
                "command": command,
                "verdict": self.verdict,
                "exit_code": self.code,
                "options": options_json(command, opts),
                "result": self.body,
            });
            if let Some(i) = input {
                v["input"] = i;
            }
            serde_json::to_string_pretty(&v).expect("reports serialize") + "\n"
        } else {
            let mut s = format!("{}\n", self.verdict);
            for l in &self.lines {
                let _ = writeln!(s, "  {l}");
            }
            if let Some(d) = doc {
                let _ = writeln!(s, "input:\n{}", d.canonical_json());
            }
            s
        };
        Outcome { code: self.code, output }
    }
}

/// Only the options a command reads, so reports do not depend on unused flags.
fn options_json(command: &str, o: &Common) -> Value {
    match command {
        "ball" => json!({"radius": o.radius, "tree": o.tree, "max_cells": o.max_cells}),
        "critical-values" => {
            json!({"radius": o.radius, "qc": o.qc, "gauge": o.gauge, "max_len": o.max_len, "max_cells": o.max_cells})
        }
        "bad-segments" => {
            json!({"radius": o.radius, "qc": o.qc, "threshold": o.threshold, "max_len": o.max_len, "max_cells": o.max_cells})
        }
        "check-tree-map" => json!({"radius": o.radius, "max_cells": o.max_cells}),
        _ => json!({}),
    }
}

fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_ERROR, format!("{}: {e}", path.display())))?;
    parse_document(&text).map_err(|e| Failure::new(EXIT_ERROR, format!("{}: {e}", path.display())))
}

fn parse_qc(s: &str) -> Result<(f64, f64), Failure> {
    let bad = || Failure::new(EXIT_ERROR, format!("--qc expects \"λ,ε\", got {s:?}"));
    let (l, e) = s.split_once(',').ok_or_else(bad)?;
    Ok((l.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?))
}

fn check_radius(r: u32) -> Result<(), Failure> {
    if r > MAX_RADIUS {
        return Err(Failure::new(EXIT_SCALE, format!("radius {r} exceeds the cap {MAX_RADIUS}")));
    }
    Ok(())
}

pub fn run(cmd: &Command) -> Outcome {
    let opts = cmd.options();
    if let Command::Corpus(_) = cmd {
        return match run_corpus(opts) {
            Ok(o) => o,
            Err(f) => fail(cmd.name(), opts, None, f),
        };
    }
    let doc = match read_document(&opts.input) {
        Ok(d) => d,
        Err(f) => return fail(cmd.name(), opts, None, f),
    };
    let result = match cmd {
        Command::Classify(_) => run_classify(&doc),
        Command::ValidateStar(_) => run_validate_star(&doc),
        Command::Trivialize(_) => run_trivialize(&doc),
        Command::Reduce(_) => run_reduce(&doc),
        Command::Ball(_) => run_ball(&doc, opts),
        Command::CriticalValues(_) => run_critical_values(&doc, opts),
        Command::BadSegments(_) => run_bad_segments(&doc, opts),
        Command::CheckTreeMap(_) => run_check_tree_map(&doc, opts),
        Command::Corpus(_) => unreachable!(),
    };
    match result {
        Ok(Emit::Report(r)) => r.render(cmd.name(), opts, Some(&doc)),
        Ok(Emit::Raw(s)) => Outcome { code: EXIT_OK, output: s },
        Err(f) => fail(cmd.name(), opts, Some(&doc), f),
    }
}

fn fail(command: &str, opts: &Common, doc: Option<&Document>, f: Failure) -> Outcome {
    let verdict = match f.code {
        EXIT_HYPOTHESIS => "HypothesisViolated",
        EXIT_SCALE => "ScaleExceeded",
        _ => "Error",
    };
    let mut r = Report::new(verdict, json!({"error": f.message})).line(f.message.clone());
    r.code = f.code;
    r.render(command, opts, doc)
}

enum Emit {
    Report(Report),
    Raw(String),
}

fn gog_of(doc: &Document) -> Result<GraphOfGroups, Failure> {
    Ok(doc.graph_of_groups()?)
}

fn run_classify(doc: &Document) -> Result<Emit, Failure> {
    let Input::Decomposition { manifold, expected } = &doc.input else {
        return Err(IoError::WrongKind { expected: "decomposition", got: doc.kind() }.into());
    };
    let c = classify(manifold)?;
    let mut r = Report::new(c.result.name(), serde_json::to_value(&c).expect("classifications serialize"))
        .line(format!("notation: {}", c.result.notation()))
        .line(format!("row: {}", c.row.map_or("-".into(), |r| r.to_string())))
        .line(format!("predicates: {}", serde_json::to_string(&c.predicates).expect("predicates serialize")));
    for (i, p) in c.primes.iter().enumerate() {
        let factors: Vec<&str> = p.factors.iter().map(|f| f.boundary.name()).collect();
        r = r.line(format!("prime {i}: {} -> {:?}, factors [{}]", p.description, p.route, factors.join(", ")));
        if let Some(t) = &p.reduction {
            r = r.line(format!("  reduction: {} steps, final {}", t.steps.len(), t.final_hash));
        }
        for n in &p.notes {
            r = r.line(format!("  note: {n}"));
        }
    }
    for s in &c.normalization.trace {
        r = r.line(format!("{:?}: {}", s.rule, s.detail));
    }
    if let Some(e) = expected {
        r = r.line(format!("expected: {}", e.name()));
        if *e != c.result {
            r.verdict = format!("{} (expected {})", c.result.name(), e.name());
            r.code = EXIT_ERROR;
        }
    }
    Ok(Emit::Report(r))
}

fn run_validate_star(doc: &Document) -> Result<Emit, Failure> {
    let g = gog_of(doc)?;
    let center = match &doc.input {
        Input::GraphOfGroups { center, .. } => *center,
        _ => None,
    };
    let rep = match center {
        Some(c) => validate_morseless_star_at(&g, c)?,
        None => validate_morseless_star(&g)?,
    };
    let verdict = if rep.is_morseless_star { "MorselessStar" } else { "NotMorselessStar" };
    let mut r = Report::new(verdict, serde_json::to_value(&rep).expect("star reports serialize"))
        .line(format!("center: {}", rep.center.map_or("-".into(), |c| c.to_string())))
        .line(format!("star shaped: {}", rep.is_star_shape))
        .line(format!("relatively hyperbolic relative to edge groups: {}", rep.relatively_hyperbolic.is_some()));
    for f in &rep.failures {
        r = r.line(format!("failure: {f}"));
    }
    if !rep.is_morseless_star {
        r.code = EXIT_HYPOTHESIS;
    }
    Ok(Emit::Report(r))
}

fn reduction_report(verdict: &str, out: &GraphOfGroups, trace: &morse_atlas::star::DerivationTrace) -> Report {
    let body = json!({
        "trace": trace,
        "result": serde_json::to_value(Document { name: None, input: Input::GraphOfGroups { gog: out.clone(), w: None, center: None } }.to_raw())
            .expect("raw documents serialize"),
    });
    let mut r = Report::new(verdict, body)
        .line(format!("initial hash: {}", trace.initial_hash))
        .line(format!("final hash: {}", trace.final_hash));
    for (i, s) in trace.steps.iter().enumerate() {
        r = r.line(format!("step {i}: {} ({})", serde_json::to_string(&s.operation).expect("operations serialize"), s.justification));
    }
    r
}

fn run_trivialize(doc: &Document) -> Result<Emit, Failure> {
    let g = gog_of(doc)?;
    let (out, trace) = trivialize_star(&g)?;
    Ok(Emit::Report(reduction_report("Trivialized", &out, &trace)))
}

fn run_reduce(doc: &Document) -> Result<Emit, Failure> {
    let g = gog_of(doc)?;
    let w = match &doc.input {
        Input::GraphOfGroups { w, .. } => w.clone().unwrap_or_default(),
        _ => Vec::new(),
    };
    let (out, trace) = reduce_graph_of_groups(&g, &w)?;
    // The trace must replay to the same result.
    let replayed = trace.replay(&g)?;
    debug_assert_eq!(replayed, out);
    Ok(Emit::Report(reduction_report("Reduced", &out, &trace)))
}

/// A Cayley ball when the input is a single group with a solved word problem,
/// otherwise a ball in the Bass-Serre space.
enum AnyBall {
    Cayley(CayleyBall),
    Space(SpaceBall),
}

impl AnyBall {
    fn as_metric(&self) -> &dyn MetricBall {
        match self {
            AnyBall::Cayley(b) => b,
            AnyBall::Space(b) => b,
        }
    }
}

fn build_ball(doc: &Document, radius: u32, max_cells: usize) -> Result<AnyBall, Failure> {
    check_radius(radius)?;
    if let Input::Group(d) = &doc.input {
        if d.normal_form().is_ok() {
            return Ok(AnyBall::Cayley(cayley_ball(d, radius, max_cells)?));
        }
    }
    Ok(AnyBall::Space(bass_serre_ball(&gog_of(doc)?, radius, max_cells)?))
}

fn run_ball(doc: &Document, o: &Common) -> Result<Emit, Failure> {
    let ball = build_ball(doc, o.radius, o.max_cells)?;
    let (vertices, edges, dot) = match &ball {
        AnyBall::Cayley(b) => (b.graph.num_vertices(), b.graph.num_edge_pairs(), None),
        AnyBall::Space(b) => (b.num_vertices(), b.graph.num_edge_pairs(), Some(b.to_dot())),
    };
    let tree = match (&ball, o.tree) {
        (AnyBall::Space(b), true) => Some(project_tree(b)?),
        _ => None,
    };
    if o.dot {
        let dot = match (&tree, dot) {
            (Some(t), _) => t.to_dot(),
            (None, Some(d)) => d,
            (None, None) => return Err(Failure::new(EXIT_ERROR, "DOT export needs a graph-of-groups ball")),
        };
        return Ok(Emit::Raw(dot));
    }
    let mut body = json!({"kind": match ball { AnyBall::Cayley(_) => "cayley", AnyBall::Space(_) => "bass_serre" },
                          "radius": o.radius, "vertices": vertices, "edges": edges});
    let mut r = Report::new(format!("Ball radius {}", o.radius), Value::Null)
        .line(format!("vertices: {vertices}"))
        .line(format!("edges: {edges}"));
    if let AnyBall::Cayley(b) = &ball {
        let mut spheres = vec![0usize; o.radius as usize + 1];
        b.distance.iter().for_each(|&d| spheres[d as usize] += 1);
        body["sphere_sizes"] = json!(spheres);
        r = r.line(format!("sphere sizes: {spheres:?}"));
    }
    if let Some(t) = &tree {
        let n = t.graph.num_vertices();
        body["tree"] = json!({"vertices": n, "edges": t.graph.num_edge_pairs(), "depth": t.depth.iter().max()});
        r = r.line(format!("tree: {n} vertices, {} edges", t.graph.num_edge_pairs()));
    }
    r.body = body;
    Ok(Emit::Report(r))
}

/// Geodesics from the basepoint to the first vertex of each sphere: powers of the first
/// generator in a Cayley ball.
fn axis_segments(ball: &dyn MetricBall, max_len: usize) -> Result<Vec<PathInBall>, Failure> {
    let m = Metric::new(ball);
    let base = ball.basepoint();
    let mut out = Vec::new();
    for len in 1..=max_len {
        let target = (0..m.num_vertices()).find(|&v| m.contains(v) && ball.depth(v) as usize == len);
        let Some(t) = target else { break };
        out.push(m.shortlex_geodesic(base, t)?);
    }
    Ok(out)
}

fn run_critical_values(doc: &Document, o: &Common) -> Result<Emit, Failure> {
    let c = parse_qc(&o.qc)?;
    let gauge = o.gauge.as_deref().map(MorseGauge::parse).transpose()?;
    let ball = build_ball(doc, o.radius, o.max_cells)?;
    let b = ball.as_metric();
    let max_len = o.max_len.unwrap_or(o.radius as usize / 2);
    let mut rows = Vec::new();
    let mut r = Report::new("CriticalValues", Value::Null);
    for seg in axis_segments(b, max_len)? {
        let v = critical_value(b, &seg, c, SearchOptions::default())?;
        let verdict = gauge.as_ref().map(|g| is_morse_at_scale(b, &seg, g, &DEFAULT_GRID, SearchOptions::default())).transpose()?;
        r = r.line(format!(
            "length {}: {}{}{}",
            seg.len(),
            v.value,
            if v.truncated { " (truncated)" } else { "" },
            verdict.as_ref().map_or(String::new(), |m| format!(", morse at scale: {}", m.pass)),
        ));
        rows.push(json!({"length": seg.len(), "value": v.value, "truncated": v.truncated,
                         "inconclusive": v.inconclusive, "morse": verdict.map(|m| m.pass)}));
    }
    r.body = json!({"qc": [c.0, c.1], "segments": rows});
    Ok(Emit::Report(r))
}

fn run_bad_segments(doc: &Document, o: &Common) -> Result<Emit, Failure> {
    let c = parse_qc(&o.qc)?;
    let ball = build_ball(doc, o.radius, o.max_cells)?;
    let max_len = o.max_len.unwrap_or(o.radius as usize / 2);
    let bad = find_bad_segments(ball.as_metric(), c, o.threshold, max_len, SearchOptions::default())?;
    let mut r = Report::new(format!("{} bad segments", bad.len()), Value::Null);
    let rows: Vec<Value> = bad
        .iter()
        .map(|s| json!({"vertices": s.segment, "length": s.segment.len(), "value_at_least": s.value.value}))
        .collect();
    for s in &bad {
        r = r.line(format!("length {}: value >= {}", s.segment.len(), s.value.value));
    }
    r.body = json!({"threshold": o.threshold, "qc": [c.0, c.1], "segments": rows});
    Ok(Emit::Report(r))
}

fn run_check_tree_map(doc: &Document, o: &Common) -> Result<Emit, Failure> {
    check_radius(o.radius)?;
    let g = gog_of(doc)?;
    let source = bass_serre_ball(&g, o.radius, o.max_cells)?;
    let target = bass_serre_ball(&g.with_trivial_edges(), o.radius, o.max_cells)?;
    let q = build_empty_boundary_bijection(&g, &source, &target, None, None, o.max_cells)?;
    let mut r = Report::new("TreeMap", serde_json::to_value(&q).expect("bijections serialize"));
    for c in &q.conditions {
        r = r.line(format!("{} {}: {:?} {}", c.id, c.name, c.status, c.detail));
    }
    Ok(Emit::Report(r))
}

#[derive(Debug, Serialize)]
struct CorpusRow {
    file: String,
    name: Option<String>,
    result: Option<String>,
    expected: Option<String>,
    ok: bool,
    error: Option<String>,
}

fn corpus_row(path: &Path) -> CorpusRow {
    let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
    let err = |name, e: String| CorpusRow { file: file.clone(), name, result: None, expected: None, ok: false, error: Some(e) };
    let doc = match read_document(path) {
        Ok(d) => d,
        Err(f) => return err(None, f.message),
    };
    let Input::Decomposition { manifold, expected } = &doc.input else {
        return err(doc.name.clone(), "not a decomposition".into());
    };
    match classify(manifold) {
        Ok(c) => CorpusRow {
            file,
            name: doc.name.clone(),
            result: Some(c.result.name().into()),
            expected: expected.map(|e| e.name().into()),
            ok: expected.is_none_or(|e: BoundaryType| e == c.result),
            error: None,
        },
        Err(e) => err(doc.name.clone(), e.to_string()),
    }
}

fn run_corpus(o: &Common) -> Result<Outcome, Failure> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(&o.input)
        .map_err(|e| Failure::new(EXIT_ERROR, format!("{}: {e}", o.input.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    // Files are independent; classify them on scoped threads and keep file order.
    let rows: Vec<CorpusRow> = std::thread::scope(|s| {
        let handles: Vec<_> = files.iter().map(|f| s.spawn(move || corpus_row(f))).collect();
        handles.into_iter().map(|h| h.join().expect("corpus worker panicked")).collect()
    });
    let passed = rows.iter().filter(|r| r.ok).count();
    let mut r = Report::new(format!("{passed}/{} match", rows.len()), json!({"rows": rows}));
    for row in &rows {
        let status = if row.ok { "ok" } else { "MISMATCH" };
        let detail = row.error.clone().unwrap_or_else(|| {
            format!("{} (expected {})", row.result.as_deref().unwrap_or("-"), row.expected.as_deref().unwrap_or("-"))
        });
        r = r.line(format!("{status} {}: {detail}", row.file));
    }
    if passed != rows.len() {
        r.code = EXIT_ERROR;
    }
    Ok(r.render("corpus", o, None))
}
