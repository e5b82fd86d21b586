//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 numerical failure,
//! 3 infeasible or unbounded base problem. Data goes to `--output` or
//! standard output; diagnostics go to standard error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{certify, Direction};
use crate::error::Error;
use crate::generate::optimal_instance;
use crate::model::{parse_document, LambdaSpec, ParametricLP};
use crate::simplex::{solve_lp, SolveStatus};
use crate::sweep::{
    adaptive_approx, benchmark, solve_and_sweep, AdaptiveLimits, BenchOptions, Method,
};
use crate::warmstart::{preprocess, Strategy, Tolerances, WarmstartOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_BASE_PROBLEM: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "parawarm", version, about = "Warmstarted parametric LP evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve P(λ) with the simplex method.
    Solve(SolveArgs),
    /// Preprocess the optimal basis of P(anchor) and evaluate it at many λ.
    Sweep(SweepArgs),
    /// Certified step radius Δ around λ.
    Bound(BoundArgs),
    /// Adaptive piecewise-linear approximation over a range.
    Approx(ApproxArgs),
    /// Time every evaluation method.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyArg {
    Eigen,
    Schur,
    Tweaked,
    Auto,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FallbackArg {
    Schur,
    Tweaked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Forward,
    Backward,
}

#[derive(Debug, Args)]
struct Common {
    /// Problem file (JSON).
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "auto")]
    strategy: StrategyArg,
    #[arg(long, value_enum, default_value = "schur")]
    fallback: FallbackArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Parameter value the cache is built at.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    anchor: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    tol_feas: Option<f64>,
    #[arg(long)]
    tol_opt: Option<f64>,
    #[arg(long)]
    tol_sing: Option<f64>,
    #[arg(long)]
    cond_threshold: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    /// `from:to:count` or a comma-separated list; defaults to the file's
    /// `lambda` entry.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long)]
    eps: f64,
    #[arg(long, value_enum, default_value = "forward")]
    direction: DirectionArg,
}

#[derive(Debug, Args)]
struct ApproxArgs {
    #[command(flatten)]
    common: Common,
    /// `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    range: String,
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 10_000)]
    max_points: usize,
    #[arg(long)]
    min_width: Option<f64>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Comma-separated subset of naive,basis_solve,zuidwijk,eigen,schur,tweaked.
    #[arg(long)]
    methods: Option<String>,
    #[arg(long, default_value_t = 3)]
    repeats: usize,
    #[arg(long)]
    naive_sample: Option<usize>,
    /// Generate an `m × 2m` instance (seeded) instead of reading a file.
    #[arg(long)]
    random: Option<usize>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BaseProblem { .. } => EXIT_BASE_PROBLEM,
            Error::Singular(_)
            | Error::Defective { .. }
            | Error::NoConvergence { .. }
            | Error::TweakExhausted { .. }
            | Error::Numerical(_)
            | Error::SingularLambda { .. }
            | Error::NotOptimal => EXIT_NUMERICAL,
            Error::Parse(_)
            | Error::Dimension { .. }
            | Error::UnknownSense { .. }
            | Error::InvalidBasis(_)
            | Error::NotStandardForm
            | Error::InvalidArgument(_) => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Parses `from:to:count` or `v1,v2,...`.
pub fn parse_lambda_spec(text: &str) -> crate::Result<LambdaSpec> {
    let bad = || Error::InvalidArgument(format!("bad lambda spec {text:?}"));
    let num = |s: &str| s.trim().parse::<f64>().ok().filter(|v| v.is_finite());
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [from, to, count] => Ok(LambdaSpec::Range {
            from: num(from).ok_or_else(bad)?,
            to: num(to).ok_or_else(bad)?,
            count: count.trim().parse().map_err(|_| bad())?,
        }),
        [list] if list.trim().is_empty() => Ok(LambdaSpec::Values { values: Vec::new() }),
        [list] => list
            .split(',')
            .map(|v| num(v).ok_or_else(bad))
            .collect::<crate::Result<Vec<_>>>()
            .map(|values| LambdaSpec::Values { values }),
        _ => Err(bad()),
    }
}

fn parse_range(text: &str) -> Outcome<(f64, f64)> {
    let parts: Vec<Option<f64>> = text.split(':').map(|s| s.trim().parse().ok()).collect();
    match parts.as_slice() {
        [Some(lo), Some(hi)] if lo.is_finite() && hi.is_finite() && lo <= hi => Ok((*lo, *hi)),
        _ => Err(usage(format!("bad range {text:?}, expected lo:hi with lo ≤ hi"))),
    }
}

impl Common {
    fn load(&self) -> Outcome<(ParametricLP, Option<LambdaSpec>)> {
        let path = self.input.as_ref().ok_or_else(|| usage("missing input file"))?;
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        let doc = parse_document(&text)?;
        Ok((doc.lp, doc.lambda))
    }

    fn options(&self) -> WarmstartOptions {
        let mut tol = Tolerances::default();
        if let Some(v) = self.tol_feas {
            tol.feas = v;
        }
        if let Some(v) = self.tol_opt {
            tol.opt = v;
        }
        if let Some(v) = self.tol_sing {
            tol.sing = v;
        }
        if let Some(v) = self.cond_threshold {
            tol.cond_threshold = v;
        }
        WarmstartOptions {
            strategy: match self.strategy {
                StrategyArg::Eigen => Strategy::Eigen,
                StrategyArg::Schur => Strategy::Schur,
                StrategyArg::Tweaked => Strategy::Tweaked,
                StrategyArg::Auto => Strategy::Auto,
            },
            fallback: match self.fallback {
                FallbackArg::Schur => Strategy::Schur,
                FallbackArg::Tweaked => Strategy::Tweaked,
            },
            tol,
            seed: self.seed,
            anchor: self.anchor,
            ..WarmstartOptions::default()
        }
    }
}

/// Shortest round-trip decimal; exponent form for very small or large
/// magnitudes.
fn fmt_f64(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-5..1e16).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn to_json<T: Serialize>(value: &T) -> Outcome<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)
        .map_err(|e| Failure { code: EXIT_NUMERICAL, message: e.to_string() })?;
    out.push(b'\n');
    Ok(out)
}

fn to_csv(header: &[&str], rows: Vec<Vec<String>>) -> Outcome<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure { code: EXIT_NUMERICAL, message: e.to_string() };
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Failure { code: EXIT_NUMERICAL, message: e.to_string() })
}

#[derive(Serialize)]
struct SolveOutput {
    lambda: f64,
    status: SolveStatus,
    objective: Option<f64>,
    basis: Option<Vec<usize>>,
    x: Option<Vec<f64>>,
    iterations: usize,
}

fn cmd_solve(a: &SolveArgs) -> Outcome<Vec<u8>> {
    let (lp, _) = a.common.load()?;
    let r = solve_lp(&lp.to_standard_form(), a.lambda)?;
    if r.status != SolveStatus::Optimal {
        return Err(Error::BaseProblem { lambda: a.lambda, status: r.status }.into());
    }
    let out = SolveOutput {
        lambda: a.lambda,
        status: r.status,
        objective: r.objective,
        basis: r.basis.map(|b| b.indices().to_vec()),
        x: r.x,
        iterations: r.iterations,
    };
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&out),
        Format::Csv => to_csv(
            &["lambda", "status", "objective", "basis"],
            vec![vec![
                fmt_f64(out.lambda),
                out.status.to_string(),
                fmt_opt(out.objective),
                out.basis
                    .unwrap_or_default()
                    .iter()
                    .map(|j| j.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            ]],
        ),
    }
}

#[derive(Serialize)]
struct SweepRow {
    lambda: f64,
    status: &'static str,
    objective: Option<f64>,
    min_x: Option<f64>,
    min_rc: Option<f64>,
    imag_resid: f64,
}

#[derive(Serialize)]
struct SweepOutput {
    strategy: Strategy,
    basis: Vec<usize>,
    counts: crate::sweep::StatusCounts,
    results: Vec<SweepRow>,
}

fn lambdas_for(flag: &Option<String>, file: Option<LambdaSpec>) -> Outcome<Vec<f64>> {
    match (flag, file) {
        (Some(text), _) => Ok(parse_lambda_spec(text)?.expand()),
        (None, Some(spec)) => Ok(spec.expand()),
        (None, None) => Err(usage("no lambda values: pass --lambda or add a lambda entry")),
    }
}

fn cmd_sweep(a: &SweepArgs) -> Outcome<Vec<u8>> {
    let (lp, spec) = a.common.load()?;
    let lambdas = lambdas_for(&a.lambda, spec)?;
    let report = solve_and_sweep(&lp, &lambdas, &a.common.options())?;
    let rows: Vec<SweepRow> = report
        .results
        .iter()
        .map(|r| SweepRow {
            lambda: r.lambda,
            status: r.status.as_str(),
            objective: r.objective,
            min_x: r.diagnostics.min_x_component,
            min_rc: r.diagnostics.min_reduced_cost,
            imag_resid: r.diagnostics.max_imag_residual,
        })
        .collect();
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&SweepOutput {
            strategy: report.strategy,
            basis: report.basis.indices().to_vec(),
            counts: report.counts,
            results: rows,
        }),
        Format::Csv => to_csv(
            &["lambda", "status", "objective", "min_x", "min_rc", "imag_resid"],
            rows.iter()
                .map(|r| {
                    vec![
                        fmt_f64(r.lambda),
                        r.status.to_string(),
                        fmt_opt(r.objective),
                        fmt_opt(r.min_x),
                        fmt_opt(r.min_rc),
                        fmt_f64(r.imag_resid),
                    ]
                })
                .collect(),
        ),
    }
}

#[derive(Serialize)]
struct BoundOutput {
    #[serde(flatten)]
    certificate: crate::bounds::DeltaCertificate,
    basis: Vec<usize>,
    status: &'static str,
    strategy: Strategy,
}

fn cmd_bound(a: &BoundArgs) -> Outcome<Vec<u8>> {
    if !(a.eps > 0.0) {
        return Err(usage("--eps must be positive"));
    }
    let (lp, _) = a.common.load()?;
    let lp = lp.to_standard_form();
    let r = solve_lp(&lp, a.lambda)?;
    let basis = match (r.status, r.basis) {
        (SolveStatus::Optimal, Some(b)) => b,
        (status, _) => return Err(Error::BaseProblem { lambda: a.lambda, status }.into()),
    };
    let cache = preprocess(&lp, &basis, &a.common.options())?;
    let direction = match a.direction {
        DirectionArg::Forward => Direction::Forward,
        DirectionArg::Backward => Direction::Backward,
    };
    let certificate = certify(&cache, a.lambda, a.eps, direction)?;
    let out = BoundOutput {
        certificate,
        basis: basis.indices().to_vec(),
        status: cache.evaluate(a.lambda).status.as_str(),
        strategy: cache.strategy(),
    };
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&out),
        Format::Csv => {
            let c = &out.certificate;
            to_csv(
                &["lambda", "epsilon", "direction", "delta_max", "binding_term", "excluded"],
                vec![vec![
                    fmt_f64(c.lambda),
                    fmt_f64(c.epsilon),
                    i8::from(c.direction).to_string(),
                    fmt_f64(c.delta_max),
                    serde_json::to_value(c.binding_term)
                        .ok()
                        .and_then(|v| v.as_str().map(str::to_string))
                        .unwrap_or_default(),
                    c.excluded.iter().map(|v| fmt_f64(*v)).collect::<Vec<_>>().join(" "),
                ]],
            )
        }
    }
}

fn cmd_approx(a: &ApproxArgs) -> Outcome<Vec<u8>> {
    let range = parse_range(&a.range)?;
    let (lp, _) = a.common.load()?;
    let limits = AdaptiveLimits { max_points: a.max_points, min_width: a.min_width };
    let approx = adaptive_approx(&lp, range, a.eps, limits, &a.common.options())?;
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => to_json(&approx),
        Format::Csv => {
            let rows = approx
                .breakpoints
                .iter()
                .map(|p| {
                    let right = approx.intervals.iter().find(|i| i.lo == p.lambda && i.hi > i.lo);
                    vec![
                        fmt_f64(p.lambda),
                        serde_json::to_value(p.status)
                            .ok()
                            .and_then(|v| v.as_str().map(str::to_string))
                            .unwrap_or_default(),
                        fmt_opt(p.objective),
                        p.basis.as_ref().map(|b| b.to_string()).unwrap_or_default(),
                        right.map(|i| i.certified.to_string()).unwrap_or_default(),
                    ]
                })
                .collect();
            to_csv(&["lambda", "status", "objective", "basis", "certified_right"], rows)
        }
    }
}

fn cmd_bench(a: &BenchArgs) -> Outcome<Vec<u8>> {
    let (lp, spec) = match a.random {
        Some(m) if m > 0 => (optimal_instance(m, 2 * m, 0.01, a.common.seed).lp, None),
        Some(_) => return Err(usage("--random needs m > 0")),
        None => a.common.load()?,
    };
    let lambdas = match (&a.lambda, spec) {
        (None, None) => LambdaSpec::Range { from: 0.0, to: 1.0, count: 200 }.expand(),
        (flag, file) => lambdas_for(flag, file)?,
    };
    let methods = match &a.methods {
        None => Method::ALL.to_vec(),
        Some(list) => list
            .split(',')
            .map(|s| s.trim().parse::<Method>())
            .collect::<crate::Result<Vec<_>>>()?,
    };
    let opts = BenchOptions {
        repeats: a.repeats,
        naive_sample: a.naive_sample,
        warmstart: a.common.options(),
    };
    let report = benchmark(&lp, &lambdas, &methods, &opts)?;
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => to_json(&report),
        Format::Csv => to_csv(
            &[
                "method",
                "preprocess_seconds",
                "median_per_lambda_seconds",
                "total_seconds",
                "evaluated",
                "extrapolated",
                "max_disagreement",
                "agrees",
                "error",
            ],
            report
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.method.as_str().to_string(),
                        fmt_opt(r.preprocess_seconds),
                        fmt_opt(r.median_per_lambda_seconds),
                        fmt_f64(r.total_seconds),
                        r.evaluated.to_string(),
                        r.extrapolated.to_string(),
                        fmt_opt(r.max_disagreement),
                        r.agrees.map(|v| v.to_string()).unwrap_or_default(),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect(),
        ),
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (common, result) = match &cli.command {
        Command::Solve(a) => (&a.common, cmd_solve(a)),
        Command::Sweep(a) => (&a.common, cmd_sweep(a)),
        Command::Bound(a) => (&a.common, cmd_bound(a)),
        Command::Approx(a) => (&a.common, cmd_approx(a)),
        Command::Bench(a) => (&a.common, cmd_bench(a)),
    };
    let written = result.and_then(|bytes| match &common.output {
        Some(path) => std::fs::write(path, &bytes)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(&bytes)
            .map_err(|e| usage(format!("cannot write output: {e}"))),
    });
    match written {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os(), &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
