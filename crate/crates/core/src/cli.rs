//! Command-line front end: `bound`, `net`, `verify`, `model-check` and `sweep`.
//!
//! Exit codes: 0 success, 1 verification failure, 2 configuration error,
//! 3 I/O or input-parse error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::bounds::{lemma32_bound, sphere_volume_paper, sphere_volume_standard, theorem_bound, BoundResult};
use crate::embedding::{
    pair_ratios, verify_with, write_pair_csv, DistortionReport, VerifyOptions, EXHAUSTIVE_PAIR_LIMIT,
};
use crate::error::Error;
use crate::metric_spaces::{
    load_matrix, load_points, sample_sphere, sample_torus, ManifoldInfo, PointFormat, PointSample, TorusLayout,
};
use crate::model_check::{run_model_check, ModelCheckConfig, ModelCheckReport};
use crate::net_builder::{greedy_net, required_delta, scale_context, Net, ScaleContext};
use crate::{EPS_THEORY_MAX, SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "kuratowski",
    version,
    about = "Epsilon-good landmark sets and their l-infinity embeddings"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the landmark-count bounds for a manifold.
    Bound(BoundArgs),
    /// Build a greedy delta-net and write it as JSON.
    Net(NetArgs),
    /// Check epsilon-goodness of a net; exits 1 when the check fails.
    Verify(VerifyArgs),
    /// Run the randomised model-space checks.
    ModelCheck(ModelCheckArgs),
    /// Tabulate net size and distortion against the bounds over several eps.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct BoundArgs {
    /// Manifold dimension (≥ 2).
    #[arg(long)]
    n: usize,
    /// Volume; accepts a `pi` suffix such as `1600pi`.
    #[arg(long, value_parser = parse_number)]
    vol: f64,
    /// Upper bound on sectional curvature.
    #[arg(long, value_parser = parse_number)]
    sec: f64,
    #[arg(long, value_parser = parse_number)]
    eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["sphere", "torus", "points", "matrix"])))]
struct InputArgs {
    /// Round sphere `N,R`: dimension and radius.
    #[arg(long, value_name = "N,R")]
    sphere: Option<String>,
    /// Flat torus with the given periods, e.g. `1,1`.
    #[arg(long, value_name = "L1,L2,...")]
    torus: Option<String>,
    /// Point cloud file (CSV or JSON array of arrays).
    #[arg(long)]
    points: Option<PathBuf>,
    /// Square CSV distance matrix.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Grid resolution per axis for `--torus` (default 32 when no `--count`).
    #[arg(long, conflicts_with = "count")]
    grid: Option<usize>,
    /// Number of random points for `--sphere` (default 1000) or `--torus`.
    #[arg(long)]
    count: Option<usize>,
    /// Neighbor count for the graph-geodesic metric of `--points`; without
    /// it the Euclidean metric is used.
    #[arg(long)]
    k: Option<usize>,
    /// Seed for every random choice of the run.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sectional curvature upper bound; required for file inputs when δ is
    /// derived from ε.
    #[arg(long, value_parser = parse_number)]
    sec: Option<f64>,
    /// Manifold dimension override for the bound columns.
    #[arg(long)]
    dim: Option<usize>,
    /// Manifold volume override for the bound columns.
    #[arg(long, value_parser = parse_number)]
    vol: Option<f64>,
}

#[derive(Debug, Args)]
struct NetArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Net parameter δ; overrides the value derived from `--eps`.
    #[arg(long, value_parser = parse_number)]
    delta: Option<f64>,
    #[arg(long, value_parser = parse_number)]
    eps: Option<f64>,
    /// Allow eps in (0, 1) outside the range covered by the bounds.
    #[arg(long)]
    empirical: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_parser = parse_number)]
    eps: f64,
    /// Net JSON written by `net`.
    #[arg(long, conflicts_with_all = ["full", "delta"])]
    net: Option<PathBuf>,
    /// Use every sample point as a landmark.
    #[arg(long, conflicts_with = "delta")]
    full: bool,
    #[arg(long, value_parser = parse_number)]
    delta: Option<f64>,
    /// Number of random pairs to test; 0 tests every pair.
    #[arg(long)]
    pairs: Option<u64>,
    /// Skip pairs closer than this.
    #[arg(long, value_parser = parse_number, default_value_t = 0.0)]
    min_distance: f64,
    /// Write per-pair ratios as CSV.
    #[arg(long)]
    pairs_csv: Option<PathBuf>,
    #[arg(long)]
    empirical: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModelCheckArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, value_parser = parse_number, default_value_t = 0.2)]
    eps: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Intrinsic dimension of the model sphere.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Comma-separated eps values.
    #[arg(long, default_value = "0.05,0.1,0.15,0.2,0.25")]
    eps_list: String,
    #[arg(long)]
    pairs: Option<u64>,
    #[arg(long)]
    empirical: bool,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

/// Parses a decimal number with an optional `pi` factor: `0.5`, `pi`,
/// `1600pi`, `2*pi`.
pub fn parse_number(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let (head, factor) = match t.strip_suffix("pi").or_else(|| t.strip_suffix("π")) {
        Some(h) => (h.trim_end_matches('*').trim(), std::f64::consts::PI),
        None => (t, 1.0),
    };
    let base = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|e| format!("invalid number `{text}`: {e}"))?,
    };
    let value = base * factor;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("invalid number `{text}`: not finite"))
    }
}

/// Why a subcommand stopped.
#[derive(Debug)]
enum Failure {
    Config(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } | Error::Parse { .. } => Failure::Io(e.to_string()),
            other => Failure::Config(other.to_string()),
        }
    }
}

type CmdResult = Result<i32, Failure>;

struct Ctx<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn warn(&mut self, msg: &str) {
        let _ = writeln!(self.err, "warning: {msg}");
    }

    fn emit(&mut self, path: Option<&Path>, text: &str) -> Result<(), Failure> {
        match path {
            Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
            None => self
                .out
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(e.to_string())),
        }
    }

    fn emit_json<T: Serialize>(&mut self, path: Option<&Path>, value: &T) -> Result<(), Failure> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::Io(e.to_string()))?;
        text.push('\n');
        self.emit(path, &text)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let mut ctx = Ctx { out, err };
    let result = match cli.command {
        Command::Bound(a) => cmd_bound(&mut ctx, a),
        Command::Net(a) => cmd_net(&mut ctx, a),
        Command::Verify(a) => cmd_verify(&mut ctx, a),
        Command::ModelCheck(a) => cmd_model_check(&mut ctx, a),
        Command::Sweep(a) => cmd_sweep(&mut ctx, a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let msg = match &f {
                Failure::Config(m) | Failure::Io(m) => m,
            };
            let _ = writeln!(ctx.err, "error: {msg}");
            f.code()
        }
    }
}

fn theory_eps(eps: f64) -> Result<f64, Failure> {
    if eps > 0.0 && eps < EPS_THEORY_MAX {
        Ok(eps)
    } else {
        Err(Failure::Config(format!(
            "eps = {eps} is outside (0, 4/(5π)) ≈ (0, {EPS_THEORY_MAX:.6})"
        )))
    }
}

/// Accepts eps in the theory range, or anywhere in (0, 1) with a warning
/// when `empirical` is set.
fn admissible_eps(ctx: &mut Ctx<'_>, eps: f64, empirical: bool) -> Result<f64, Failure> {
    if eps > 0.0 && eps < EPS_THEORY_MAX {
        return Ok(eps);
    }
    if empirical && eps > 0.0 && eps < 1.0 {
        ctx.warn(&format!(
            "eps = {eps} lies outside (0, 4/(5π)); results are empirical only"
        ));
        return Ok(eps);
    }
    Err(Failure::Config(format!(
        "eps = {eps} is outside (0, 4/(5π)) ≈ (0, {EPS_THEORY_MAX:.6}); pass --empirical to allow (0, 1)"
    )))
}

#[derive(Serialize)]
struct BoundDocument {
    schema_version: u32,
    n: usize,
    vol: f64,
    eps: f64,
    scale: ScaleContext,
    c_n: f64,
    /// δ in the original metric.
    required_delta: f64,
    theorem_bound: BoundResult,
    /// Packing bound of the rescaled metric, volume `tⁿ·vol`.
    lemma32_bound: BoundResult,
    lemma32_scaled_volume: f64,
    sphere_volume_paper: f64,
    sphere_volume_standard: f64,
}

fn cmd_bound(ctx: &mut Ctx<'_>, a: BoundArgs) -> CmdResult {
    let eps = theory_eps(a.eps)?;
    if a.n < 2 {
        return Err(Failure::Config(format!("n = {} must be at least 2", a.n)));
    }
    let scale = scale_context(a.sec)?;
    let theorem = theorem_bound(a.n, a.vol, scale.k, eps)?;
    let scaled_vol = a.vol * scale.t.powi(a.n as i32);
    let lemma = lemma32_bound(a.n, scaled_vol, eps)?;
    let doc = BoundDocument {
        schema_version: SCHEMA_VERSION,
        n: a.n,
        vol: a.vol,
        eps,
        scale,
        c_n: theorem.c_n,
        required_delta: required_delta(eps, &scale)?,
        theorem_bound: theorem,
        lemma32_bound: lemma,
        lemma32_scaled_volume: scaled_vol,
        sphere_volume_paper: sphere_volume_paper(a.n)?,
        sphere_volume_standard: sphere_volume_standard(a.n)?,
    };
    ctx.emit_json(a.out.as_deref(), &doc)?;
    Ok(EXIT_OK)
}

fn parse_list(text: &str, what: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| parse_number(s).map_err(|e| Failure::Config(format!("{what}: {e}"))))
        .collect()
}

fn build_sample(input: &InputArgs) -> Result<PointSample, Failure> {
    let mut sample = if let Some(spec) = &input.sphere {
        let parts = parse_list(spec, "--sphere")?;
        let [n, radius] = parts[..] else {
            return Err(Failure::Config("--sphere expects N,R".into()));
        };
        if n.fract() != 0.0 || n < 1.0 || radius <= 0.0 {
            return Err(Failure::Config("--sphere needs an integer N ≥ 1 and R > 0".into()));
        }
        if input.grid.is_some() {
            return Err(Failure::Config("--grid applies to --torus only".into()));
        }
        sample_sphere(n as usize, radius, input.count.unwrap_or(1000), input.seed)?
    } else if let Some(spec) = &input.torus {
        let periods = parse_list(spec, "--torus")?;
        let layout = match (input.grid, input.count) {
            (_, Some(count)) => TorusLayout::Random {
                count,
                seed: input.seed,
            },
            (grid, None) => TorusLayout::Grid {
                resolution: grid.unwrap_or(32),
            },
        };
        sample_torus(&periods, layout)?
    } else if let Some(path) = &input.points {
        load_points(path, PointFormat::from_path(path), input.k)?
    } else if let Some(path) = &input.matrix {
        load_matrix(path)?
    } else {
        return Err(Failure::Config("no input given".into()));
    };
    if let Some(sec) = input.sec {
        sample.set_sec_sup(sec);
    }
    if input.dim.is_some() || input.vol.is_some() {
        let known = sample.manifold();
        let dim = input.dim.or(known.map(|m| m.dim));
        let volume = input.vol.or(known.map(|m| m.volume));
        match (dim, volume) {
            (Some(dim), Some(volume)) => sample.set_manifold(ManifoldInfo { dim, volume }),
            _ => {
                return Err(Failure::Config(
                    "--dim and --vol must both be known for this input".into(),
                ))
            }
        }
    }
    Ok(sample)
}

fn sample_scale(sample: &PointSample) -> Result<ScaleContext, Failure> {
    let sec = sample
        .sec_sup()
        .ok_or_else(|| Failure::Config("curvature bound unknown for this input; pass --sec".into()))?;
    Ok(scale_context(sec)?)
}

/// δ from `--delta`, or `(ε/2)/t` from `--eps`.
fn resolve_delta(
    ctx: &mut Ctx<'_>,
    sample: &PointSample,
    delta: Option<f64>,
    eps: Option<f64>,
    empirical: bool,
) -> Result<f64, Failure> {
    if let Some(d) = delta {
        if d > 0.0 {
            return Ok(d);
        }
        return Err(Failure::Config(format!("delta = {d} must be positive")));
    }
    let eps = eps.ok_or_else(|| Failure::Config("pass --delta or --eps".into()))?;
    let eps = admissible_eps(ctx, eps, empirical)?;
    let scale = sample_scale(sample)?;
    if eps < EPS_THEORY_MAX {
        Ok(required_delta(eps, &scale)?)
    } else {
        Ok(0.5 * eps / scale.t)
    }
}

#[derive(Serialize, Deserialize)]
struct NetDocument {
    schema_version: u32,
    #[serde(default)]
    sample_label: Option<String>,
    #[serde(default)]
    sample_size: Option<usize>,
    #[serde(flatten)]
    net: Net,
}

fn cmd_net(ctx: &mut Ctx<'_>, a: NetArgs) -> CmdResult {
    let sample = build_sample(&a.input)?;
    let delta = resolve_delta(ctx, &sample, a.delta, a.eps, a.empirical)?;
    let net = greedy_net(&sample, delta)?;
    let doc = NetDocument {
        schema_version: SCHEMA_VERSION,
        sample_label: Some(sample.label().to_string()),
        sample_size: Some(sample.len()),
        net,
    };
    ctx.emit_json(a.out.as_deref(), &doc)?;
    Ok(EXIT_OK)
}

fn read_net(path: &Path, sample: &PointSample) -> Result<Net, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let doc: NetDocument =
        serde_json::from_str(&text).map_err(|e| Failure::Io(format!("{}: line {}: {e}", path.display(), e.line())))?;
    if let Some(size) = doc.sample_size {
        if size != sample.len() {
            return Err(Failure::Config(format!(
                "net was built on {size} points but the sample has {}",
                sample.len()
            )));
        }
    }
    if let Some(&bad) = doc.net.landmark_indices.iter().find(|&&i| i >= sample.len()) {
        return Err(Failure::Config(format!("landmark index {bad} out of range")));
    }
    Ok(doc.net)
}

fn pair_budget(sample: &PointSample, requested: Option<u64>) -> Result<u64, Failure> {
    let n = sample.len() as u64;
    let total = n * n.saturating_sub(1) / 2;
    match requested {
        Some(b) => Ok(b),
        None if total <= EXHAUSTIVE_PAIR_LIMIT => Ok(0),
        None => Err(Failure::Config(format!(
            "{total} pairs exceed the exhaustive limit of {EXHAUSTIVE_PAIR_LIMIT}; pass --pairs"
        ))),
    }
}

#[derive(Serialize)]
struct VerifyDocument<'a> {
    schema_version: u32,
    sample_label: &'a str,
    delta: f64,
    covering_radius: Option<f64>,
    #[serde(flatten)]
    report: &'a DistortionReport,
}

fn cmd_verify(ctx: &mut Ctx<'_>, a: VerifyArgs) -> CmdResult {
    let eps = admissible_eps(ctx, a.eps, a.empirical)?;
    let sample = build_sample(&a.input)?;
    let net = if let Some(path) = &a.net {
        read_net(path, &sample)?
    } else if a.full {
        Net::full(&sample)
    } else {
        let delta = resolve_delta(ctx, &sample, a.delta, Some(eps), a.empirical)?;
        greedy_net(&sample, delta)?
    };
    let opts = VerifyOptions {
        eps,
        pair_budget: pair_budget(&sample, a.pairs)?,
        seed: a.input.seed,
        min_pair_distance: a.min_distance,
    };
    let report = verify_with(&sample, &net, &opts)?;
    if let Some(path) = &a.pairs_csv {
        let ratios = pair_ratios(&sample, &net, &opts)?;
        let file = fs::File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        write_pair_csv(std::io::BufWriter::new(file), &ratios)
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    let doc = VerifyDocument {
        schema_version: SCHEMA_VERSION,
        sample_label: sample.label(),
        delta: net.delta,
        covering_radius: net.covering_radius,
        report: &report,
    };
    ctx.emit_json(a.out.as_deref(), &doc)?;
    Ok(if report.passed() { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct ModelCheckDocument<'a> {
    schema_version: u32,
    #[serde(flatten)]
    report: &'a ModelCheckReport,
}

fn cmd_model_check(ctx: &mut Ctx<'_>, a: ModelCheckArgs) -> CmdResult {
    let eps = theory_eps(a.eps)?;
    if a.trials == 0 || a.dim < 1 {
        return Err(Failure::Config("--trials and --dim must be positive".into()));
    }
    let report = run_model_check(&ModelCheckConfig {
        trials: a.trials,
        eps,
        seed: a.seed,
        dim: a.dim,
    })?;
    ctx.emit_json(
        a.out.as_deref(),
        &ModelCheckDocument {
            schema_version: SCHEMA_VERSION,
            report: &report,
        },
    )?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

#[derive(Serialize)]
struct SweepRow {
    eps: f64,
    delta: f64,
    #[serde(rename = "|S|")]
    landmarks: usize,
    lower_const: f64,
    theorem_bound: Option<f64>,
    lemma32_bound: Option<f64>,
}

fn cmd_sweep(ctx: &mut Ctx<'_>, a: SweepArgs) -> CmdResult {
    let sample = build_sample(&a.input)?;
    let scale = sample_scale(&sample)?;
    let eps_values = parse_list(&a.eps_list, "--eps-list")?;
    let budget = pair_budget(&sample, a.pairs)?;
    let manifold = sample.manifold();
    let mut rows = Vec::with_capacity(eps_values.len());
    for eps in eps_values {
        let eps = admissible_eps(ctx, eps, a.empirical)?;
        let delta = 0.5 * eps / scale.t;
        let net = greedy_net(&sample, delta)?;
        let report = verify_with(
            &sample,
            &net,
            &VerifyOptions {
                eps,
                pair_budget: budget,
                seed: a.input.seed,
                min_pair_distance: 0.0,
            },
        )?;
        let (theorem, lemma) = match manifold {
            Some(m) if m.dim >= 2 && eps < EPS_THEORY_MAX => (
                Some(theorem_bound(m.dim, m.volume, scale.k, eps)?.bound),
                Some(lemma32_bound(m.dim, m.volume * scale.t.powi(m.dim as i32), eps)?.bound),
            ),
            _ => (None, None),
        };
        rows.push(SweepRow {
            eps,
            delta,
            landmarks: net.len(),
            lower_const: report.lower_const,
            theorem_bound: theorem,
            lemma32_bound: lemma,
        });
    }
    if a.format == TableFormat::Json {
        #[derive(Serialize)]
        struct SweepDocument<'a> {
            schema_version: u32,
            sample_label: &'a str,
            rows: &'a [SweepRow],
        }
        let doc = SweepDocument {
            schema_version: SCHEMA_VERSION,
            sample_label: sample.label(),
            rows: &rows,
        };
        ctx.emit_json(a.out.as_deref(), &doc)?;
        return Ok(EXIT_OK);
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        w.serialize(row).map_err(|e| Failure::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Io(e.to_string()))?;
    ctx.emit(a.out.as_deref(), &String::from_utf8_lossy(&bytes))?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn numbers_with_pi() {
        assert_eq!(parse_number("0.25").unwrap(), 0.25);
        assert_eq!(parse_number("pi").unwrap(), PI);
        assert_eq!(parse_number("1600pi").unwrap(), 1600.0 * PI);
        assert_eq!(parse_number("2*pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_number("-pi").unwrap(), -PI);
        assert!(parse_number("abc").is_err());
        assert!(parse_number("1e400").is_err());
    }
}
