//! Batch evaluation over a set of λ, adaptive piecewise-linear
//! approximation and the method benchmark.

mod adaptive;
mod bench;

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Basis, ParametricLP};
use crate::simplex::{solve_lp_with, SimplexOptions, SolveStatus};
use crate::warmstart::{preprocess, EvalStatus, EvaluationResult, Strategy, WarmstartCache,
    WarmstartOptions};

pub use adaptive::{
    adaptive_approx, adaptive_approx_with, AdaptiveLimits, ApproxInterval, Breakpoint,
    ExcludedInterval, PiecewiseLinearApprox, PointStatus, ReanchorEvent,
};
pub use bench::{benchmark, BenchOptions, BenchReport, BenchRow, Method};

/// Environment variable capping the sweep worker count.
pub const THREADS_ENV: &str = "PARAWARM_THREADS";

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Timings {
    /// `None` when the cache was built outside the sweep.
    pub preprocess_seconds: Option<f64>,
    pub per_lambda_seconds: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct StatusCounts {
    pub singular: usize,
    pub infeasible_basis: usize,
    pub feasible_suboptimal: usize,
    pub optimal: usize,
}

impl StatusCounts {
    fn tally<'a>(results: impl IntoIterator<Item = &'a EvaluationResult>) -> Self {
        let mut c = Self::default();
        for r in results {
            match r.status {
                EvalStatus::Singular => c.singular += 1,
                EvalStatus::InfeasibleBasis => c.infeasible_basis += 1,
                EvalStatus::FeasibleSuboptimal => c.feasible_suboptimal += 1,
                EvalStatus::Optimal => c.optimal += 1,
            }
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub strategy: Strategy,
    pub basis: Basis,
    pub results: Vec<EvaluationResult>,
    pub counts: StatusCounts,
    pub timings: Timings,
}

/// Worker count from `PARAWARM_THREADS`, if set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Evaluates the cache at every λ, in order, using the worker count from
/// `PARAWARM_THREADS` (default: available parallelism).
pub fn sweep(cache: &WarmstartCache, lambdas: &[f64]) -> SweepReport {
    sweep_with_threads(cache, lambdas, threads_from_env())
}

pub fn sweep_with_threads(
    cache: &WarmstartCache,
    lambdas: &[f64],
    threads: Option<usize>,
) -> SweepReport {
    let run = || -> Vec<(EvaluationResult, f64)> {
        lambdas
            .par_iter()
            .map(|&l| {
                let t = Instant::now();
                let r = cache.evaluate(l);
                (r, t.elapsed().as_secs_f64())
            })
            .collect()
    };
    let timed = match threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(run),
            Err(_) => run(),
        },
        None => run(),
    };
    let (results, per_lambda_seconds): (Vec<_>, Vec<_>) = timed.into_iter().unzip();
    SweepReport {
        strategy: cache.strategy(),
        basis: cache.basis().clone(),
        counts: StatusCounts::tally(&results),
        results,
        timings: Timings { preprocess_seconds: None, per_lambda_seconds },
    }
}

/// Solves `P(anchor)`, preprocesses its optimal basis once and sweeps.
pub fn solve_and_sweep(
    lp: &ParametricLP,
    lambdas: &[f64],
    opts: &WarmstartOptions,
) -> Result<SweepReport> {
    let lp = lp.to_standard_form();
    let base = solve_lp_with(&lp, opts.anchor, &SimplexOptions::default(), None)?;
    let basis = match (base.status, base.basis) {
        (SolveStatus::Optimal, Some(b)) => b,
        (status, _) => return Err(Error::BaseProblem { lambda: opts.anchor, status }),
    };
    let t = Instant::now();
    let cache = preprocess(&lp, &basis, opts)?;
    let preprocess_seconds = t.elapsed().as_secs_f64();
    let mut report = sweep(&cache, lambdas);
    report.timings.preprocess_seconds = Some(preprocess_seconds);
    Ok(report)
}

/// Median of a non-empty sample; `NaN` when empty.
pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}
