use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use mwtree_core::closed_forms::{
    distance_inverse, distance_log_determinant, ginverse_distance_recovery,
    ginverse_invariance_check, inertia_check, interlacing_check, invertibility_check,
    rank_characterization_probe, rank_deficient_weighting, rank_deficient_weighting_at,
    verify_identities, IDENTITY_NAMES,
};
use mwtree_core::gen::{random_connected_nontree, random_tree, GenConfig, WeightKind};
use mwtree_core::linalg::{frobenius_distance, log_determinant, numerical_rank, DEFAULT_RANK_TOL};
use mwtree_core::operators::{distance_matrix, incidence_matrix, laplacian};
use mwtree_core::{DenseMatrix, Error, LaplacianMode, MatrixWeightedGraph};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::graph_file::GraphFile;
use crate::report::{CheckRecord, InputRecord, Report};

/// Why a command stopped without producing a report. Each variant owns one
/// exit code.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or invalid input, bad flags (exit 2).
    Input(String),
    /// Input is valid but the command's hypotheses fail (exit 3).
    Precondition(String),
    /// The distance matrix has a singular factor (exit 4).
    NotInvertible(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Precondition(_) => 3,
            Failure::NotInvertible(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Precondition(m) | Failure::NotInvertible(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NotInvertible(_) => Failure::NotInvertible(e.to_string()),
            Error::Malformed(_)
            | Error::NotConnected
            | Error::DataLength { .. }
            | Error::NonFinite { .. }
            | Error::BadConfig(_) => Failure::Input(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

type Outcome = Result<Report, Failure>;

/// Flags shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Options {
    pub tolerance: Option<f64>,
    pub seed: u64,
    pub trials: usize,
    pub emit_matrices: bool,
}

impl Options {
    fn tol(&self, default: f64) -> f64 {
        self.tolerance.unwrap_or(default)
    }
}

/// A parsed input graph with its provenance.
pub struct Input {
    pub record: InputRecord,
    pub graph: MatrixWeightedGraph,
}

impl Input {
    /// Reads `path`, or stdin for `-`.
    pub fn load(path: &str) -> Result<Self, Failure> {
        let bytes = if path == "-" {
            let mut buf = Vec::new();
            std::io::Read::read_to_end(&mut std::io::stdin(), &mut buf)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            buf
        } else {
            fs::read(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?
        };
        let text = std::str::from_utf8(&bytes).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        let graph = GraphFile::parse(text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
        Ok(Self {
            record: InputRecord::new(path, &bytes),
            graph,
        })
    }
}

/// Errors meaning "this check does not apply to the input" rather than a
/// broken input or a numerical breakdown.
fn is_hypothesis(e: &Error) -> bool {
    matches!(
        e,
        Error::NotATree
            | Error::IsATree
            | Error::NotConnected
            | Error::WeightNotSpd(_)
            | Error::SingularWeight(_)
            | Error::NotInvertible(_)
            | Error::NoBridgelessEdge
    )
}

/// Runs a check group; hypothesis failures become skipped records for every
/// name in the group, anything else aborts the command.
fn run_group<T>(
    report: &mut Report,
    names: &[&str],
    result: mwtree_core::Result<T>,
) -> Result<Option<T>, Failure> {
    match result {
        Ok(v) => Ok(Some(v)),
        Err(e) if is_hypothesis(&e) => {
            for name in names {
                report.push(CheckRecord::skipped(*name, e.to_string()));
            }
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    D,
    L,
    Q,
}

pub fn build(input: Input, which: Which, mode: LaplacianMode) -> Outcome {
    let g = &input.graph;
    let mut report = Report::new("build", input.record);
    let (name, m) = match which {
        Which::D => ("D", distance_matrix(g)?),
        Which::L => ("L", laplacian(g, mode)?),
        Which::Q => ("Q", incidence_matrix(g)?),
    };
    report.data = json!({
        "which": which,
        "mode": (which == Which::L).then_some(mode),
        "n": g.n(),
        "s": g.s(),
        "rows": m.rows(),
        "cols": m.cols(),
    });
    report.matrix(name, &m);
    Ok(report)
}

pub fn invert(input: Input, opts: &Options) -> Outcome {
    let g = &input.graph;
    let mut report = Report::new("invert", input.record);
    invertibility_check(g)?.into_result()?;
    let (n, s) = (g.n(), g.s());
    let d = distance_matrix(g)?;
    let d_inv = distance_inverse(g)?;
    let residual = frobenius_distance(&(&*d * &*d_inv), &DenseMatrix::identity(n * s));
    report.push(CheckRecord::measured("D·D⁻¹ = I", residual, opts.tol(1e-8 * (n * s) as f64)));
    report.data = json!({
        "n": n,
        "s": s,
        "invertible": true,
        "delta": g.delta_vector(),
    });
    if opts.emit_matrices {
        report.matrix("D", &d);
        report.matrix("D_inv", &d_inv);
    }
    Ok(report)
}

pub fn det(input: Input, opts: &Options) -> Outcome {
    let g = &input.graph;
    let mut report = Report::new("det", input.record);
    let closed = distance_log_determinant(g)?;
    let d = distance_matrix(g)?;
    let lu = log_determinant(&d)?;
    let residual = if closed.sign == 0.0 && lu.sign == 0.0 {
        0.0
    } else if closed.sign != lu.sign {
        f64::INFINITY
    } else {
        (closed.ln_abs - lu.ln_abs).abs() / closed.ln_abs.abs().max(1.0)
    };
    let check = CheckRecord::measured("closed-form det D vs LU", residual, opts.tol(1e-7));
    report.push(if closed.sign != lu.sign {
        check.with_reason("signs differ")
    } else {
        check
    });
    report.data = json!({
        "n": g.n(),
        "s": g.s(),
        "sign": closed.sign,
        "ln_abs": finite_or_null(closed.ln_abs),
        "value": closed.value(),
        "lu": { "sign": lu.sign, "ln_abs": finite_or_null(lu.ln_abs) },
    });
    if opts.emit_matrices {
        report.matrix("D", &d);
    }
    Ok(report)
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Identities,
    Ginverse,
    Spectrum,
    Rank,
}

const INVARIANCE: &str = "g-inverse pair contraction invariance";
const RECOVERY: &str = "g-inverse recovers distance blocks";
const INERTIA: &str = "inertia of D is (s, (n-1)s, 0)";
const INTERLACING: &str = "μ_{s+i} ≤ -2/λ_i ≤ μ_i";
const RANK_PROBE: &str = "tree iff rank L = (n-1)s for all nonsingular weights";
const RANK_SPD: &str = "positive definite weights give rank L = (n-1)s";

pub fn verify(input: Input, suite: Suite, opts: &Options) -> Outcome {
    let g = &input.graph;
    let mut report = Report::new("verify", input.record);
    let mut data = Map::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;

    if wants(Suite::Identities) {
        if let Some(checks) = run_group(&mut report, &IDENTITY_NAMES, verify_identities(g))? {
            for c in checks {
                report.push(CheckRecord::from(c).retolerance(opts.tolerance));
            }
        }
    }

    if wants(Suite::Ginverse) {
        let seeds = (opts.seed, opts.seed.wrapping_add(1));
        if let Some(c) = run_group(&mut report, &[INVARIANCE], ginverse_invariance_check(g, seeds))? {
            report.push(CheckRecord::from(c).retolerance(opts.tolerance));
        }
        if let Some(c) = run_group(&mut report, &[RECOVERY], ginverse_distance_recovery(g, opts.seed))? {
            report.push(CheckRecord::from(c).retolerance(opts.tolerance));
        }
    }

    if wants(Suite::Spectrum) {
        if let Some(inertia) = run_group(&mut report, &[INERTIA], inertia_check(g))? {
            let (n, s) = (g.n(), g.s());
            let off = inertia.positive.abs_diff(s) + inertia.negative.abs_diff((n - 1) * s) + inertia.zero;
            report.push(CheckRecord::count(INERTIA, off));
            data.insert("inertia".into(), json!(inertia));
        }
        if let Some(r) = run_group(&mut report, &[INTERLACING], interlacing_check(g))? {
            let violation = (-r.worst_slack()).max(0.0);
            report.push(CheckRecord::measured(INTERLACING, violation, opts.tol(r.tolerance)));
            data.insert("mu".into(), json!(r.mu.as_slice()));
            data.insert("lambda".into(), json!(r.lambda.as_slice()));
        }
    }

    if wants(Suite::Rank) {
        let probe = rank_characterization_probe(g, opts.trials, opts.seed);
        if let Some(v) = run_group(&mut report, &[RANK_PROBE], probe)? {
            report.push(CheckRecord::count(RANK_PROBE, usize::from(!v.holds())));
            data.insert("rank".into(), json!(v));
        }
        if g.has_spd_weights() {
            let l = laplacian(g, LaplacianMode::Inverted)?;
            let rank = numerical_rank(&l, DEFAULT_RANK_TOL);
            report.push(CheckRecord::count(RANK_SPD, rank.abs_diff((g.n() - 1) * g.s())));
        } else {
            report.push(CheckRecord::skipped(RANK_SPD, "weights are not all symmetric positive definite"));
        }
    }

    if opts.emit_matrices {
        if let Ok(d) = distance_matrix(g) {
            report.matrix("D", &d);
        }
        if let Ok(l) = laplacian(g, LaplacianMode::Inverted) {
            report.matrix("L", &l);
        }
    }
    if !data.is_empty() {
        report.data = Value::Object(data);
    }
    Ok(report)
}

pub fn deficient(input: Input, edge: Option<(usize, usize)>) -> Outcome {
    let g = &input.graph;
    let mut report = Report::new("deficient", input.record);
    let w = match edge {
        None => rank_deficient_weighting(g)?,
        Some((u, v)) => {
            let id = g
                .find_edge(u, v)
                .ok_or_else(|| Failure::Precondition(format!("graph has no edge ({u}, {v})")))?;
            rank_deficient_weighting_at(g, id)?
        }
    };
    report.push(CheckRecord::count(
        "reweighted scalar Laplacian rank < n-1",
        usize::from(!w.is_deficient()),
    ));
    report.data = json!(w);
    Ok(report)
}

/// Parsed flags of the `random` subcommand.
pub struct RandomSpec {
    pub n: RangeInclusive<usize>,
    pub s: RangeInclusive<usize>,
    pub kind: WeightKind,
    pub condition_cap: f64,
    pub count: usize,
    pub out: PathBuf,
    pub nontree: bool,
}

#[derive(Debug, Serialize)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub seed: u64,
    pub n: usize,
    pub s: usize,
    pub edges: usize,
}

/// Writes `count` graph files, instance `i` drawn with seed `seed + i`, and
/// returns the manifest.
pub fn random(spec: &RandomSpec, seed: u64) -> Result<Value, Failure> {
    fs::create_dir_all(&spec.out).map_err(|e| Failure::Input(format!("{}: {e}", spec.out.display())))?;
    let stem = if spec.nontree { "nontree" } else { "tree" };
    let mut entries = Vec::with_capacity(spec.count);
    for i in 0..spec.count as u64 {
        let seed_i = seed.wrapping_add(i);
        let cfg = GenConfig::with_ranges(spec.n.clone(), spec.s.clone(), spec.kind)
            .with_condition_cap(spec.condition_cap)
            .with_seed(seed_i);
        let g = if spec.nontree {
            random_connected_nontree(&cfg)?
        } else {
            random_tree(&cfg)?
        };
        let path = spec.out.join(format!("{stem}-{seed_i}.json"));
        write_graph(&path, &g)?;
        entries.push(ManifestEntry {
            path,
            seed: seed_i,
            n: g.n(),
            s: g.s(),
            edges: g.edge_count(),
        });
    }
    Ok(json!({
        "schema": "mwtree.manifest/v1",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "kind": spec.kind,
        "condition_cap": spec.condition_cap,
        "files": entries,
    }))
}

fn write_graph(path: &Path, g: &MatrixWeightedGraph) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&GraphFile::from_graph(g)).expect("graph serializes");
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}
