//! Wall-clock comparison of the per-λ evaluation methods.

use std::time::Instant;

use serde::Serialize;

use super::median;
use crate::error::{Error, Result};
use crate::linalg::DenseLu;
use crate::model::{partition, Basis, ParametricLP};
use crate::simplex::{solve_lp, SolveStatus};
use crate::warmstart::{
    preprocess, zuidwijk_objective, zuidwijk_preprocess, EvalStatus, Strategy, WarmstartOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Full simplex solve per λ.
    Naive,
    /// Dense factorization of `A_B + λD_B` per λ.
    BasisSolve,
    Zuidwijk,
    Eigen,
    Schur,
    Tweaked,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Naive,
        Method::BasisSolve,
        Method::Zuidwijk,
        Method::Eigen,
        Method::Schur,
        Method::Tweaked,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Naive => "naive",
            Method::BasisSolve => "basis_solve",
            Method::Zuidwijk => "zuidwijk",
            Method::Eigen => "eigen",
            Method::Schur => "schur",
            Method::Tweaked => "tweaked",
        }
    }

    fn strategy(self) -> Option<Strategy> {
        match self {
            Method::Eigen => Some(Strategy::Eigen),
            Method::Schur => Some(Strategy::Schur),
            Method::Tweaked => Some(Strategy::Tweaked),
            _ => None,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    /// Timing repetitions; medians are reported.
    pub repeats: usize,
    /// Run the naive method on this many evenly spaced λ only and
    /// extrapolate its total.
    pub naive_sample: Option<usize>,
    pub warmstart: WarmstartOptions,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self { repeats: 3, naive_sample: None, warmstart: WarmstartOptions::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub method: Method,
    pub preprocess_seconds: Option<f64>,
    pub median_per_lambda_seconds: Option<f64>,
    /// Sum of per-λ times; scaled up to all λ when `extrapolated`.
    pub total_seconds: f64,
    pub evaluated: usize,
    pub extrapolated: bool,
    /// `max |o − o_ref| / (1 + |o_ref|)` against `basis_solve`.
    pub max_disagreement: Option<f64>,
    pub agrees: Option<bool>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub rows_m: usize,
    pub cols_n: usize,
    pub lambdas: usize,
    pub basis: Basis,
    pub base_solve_seconds: f64,
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn row(&self, method: Method) -> Option<&BenchRow> {
        self.rows.iter().find(|r| r.method == method)
    }
}

pub const AGREEMENT_TOL: f64 = 1e-6;

struct Pass {
    preprocess: Option<f64>,
    times: Vec<f64>,
    objectives: Vec<Option<f64>>,
}

fn sample_indices(p: usize, sample: Option<usize>) -> Vec<usize> {
    match sample {
        Some(s) if s < p => (0..s).map(|k| k * p / s).collect(),
        _ => (0..p).collect(),
    }
}

fn run_pass(
    lp: &ParametricLP,
    basis: &Basis,
    lambdas: &[f64],
    method: Method,
    opts: &BenchOptions,
) -> Result<Pass> {
    let mut times = Vec::with_capacity(lambdas.len());
    let mut objectives = Vec::with_capacity(lambdas.len());
    let mut timed = |f: &mut dyn FnMut(f64) -> Option<f64>, l: f64| {
        let t = Instant::now();
        let o = f(l);
        times.push(t.elapsed().as_secs_f64());
        objectives.push(o);
    };
    let preprocess_seconds = match method {
        Method::Naive => {
            for &l in lambdas {
                timed(&mut |l| solve_lp(lp, l).ok().and_then(|r| r.objective), l);
            }
            None
        }
        Method::BasisSolve => {
            let part = partition(lp, basis)?;
            for &l in lambdas {
                timed(
                    &mut |l| {
                        let lu = DenseLu::factor(&(&part.a_b + &part.d_b * l)).ok()?;
                        let x = lu.solve(lp.b());
                        Some(part.c_b.iter().zip(&x).map(|(c, v)| c * v).sum())
                    },
                    l,
                );
            }
            None
        }
        Method::Zuidwijk => {
            let t = Instant::now();
            let part = partition(lp, basis)?;
            let z = zuidwijk_preprocess(&part, lp.b())?;
            let pre = t.elapsed().as_secs_f64();
            for &l in lambdas {
                timed(&mut |l| zuidwijk_objective(&z, l).ok(), l);
            }
            Some(pre)
        }
        Method::Eigen | Method::Schur | Method::Tweaked => {
            let wopts = WarmstartOptions {
                strategy: method.strategy().expect("warmstart method"),
                ..opts.warmstart.clone()
            };
            let t = Instant::now();
            let cache = preprocess(lp, basis, &wopts)?;
            let pre = t.elapsed().as_secs_f64();
            for &l in lambdas {
                timed(&mut |l| cache.evaluate(l).objective, l);
            }
            Some(pre)
        }
    };
    Ok(Pass { preprocess: preprocess_seconds, times, objectives })
}

/// Times every method on the optimal basis of `P(0)`. Per-method failures
/// are recorded in the row and do not stop the others.
pub fn benchmark(
    lp: &ParametricLP,
    lambdas: &[f64],
    methods: &[Method],
    opts: &BenchOptions,
) -> Result<BenchReport> {
    let lp = lp.to_standard_form();
    let t = Instant::now();
    let base = solve_lp(&lp, 0.0)?;
    let base_solve_seconds = t.elapsed().as_secs_f64();
    let basis = match (base.status, base.basis) {
        (SolveStatus::Optimal, Some(b)) => b,
        (status, _) => return Err(Error::BaseProblem { lambda: 0.0, status }),
    };

    // Reference objectives and optimality flags, outside any timing.
    let reference = run_pass(&lp, &basis, lambdas, Method::BasisSolve, opts)?.objectives;
    let optimal: Vec<bool> = match preprocess(&lp, &basis, &opts.warmstart) {
        Ok(c) => lambdas.iter().map(|&l| c.evaluate(l).status == EvalStatus::Optimal).collect(),
        Err(_) => vec![false; lambdas.len()],
    };

    let repeats = opts.repeats.max(1);
    let mut rows = Vec::with_capacity(methods.len());
    for &method in methods {
        let idx = if method == Method::Naive {
            sample_indices(lambdas.len(), opts.naive_sample)
        } else {
            (0..lambdas.len()).collect()
        };
        let sub: Vec<f64> = idx.iter().map(|&i| lambdas[i]).collect();
        let passes: Result<Vec<Pass>> =
            (0..repeats).map(|_| run_pass(&lp, &basis, &sub, method, opts)).collect();
        let passes = match passes {
            Ok(p) => p,
            Err(e) => {
                rows.push(BenchRow {
                    method,
                    preprocess_seconds: None,
                    median_per_lambda_seconds: None,
                    total_seconds: 0.0,
                    evaluated: 0,
                    extrapolated: false,
                    max_disagreement: None,
                    agrees: None,
                    error: Some(e.to_string()),
                });
                continue;
            }
        };
        let extrapolated = sub.len() < lambdas.len();
        let scale = if extrapolated && !sub.is_empty() {
            lambdas.len() as f64 / sub.len() as f64
        } else {
            1.0
        };
        let pre: Vec<f64> = passes.iter().filter_map(|p| p.preprocess).collect();
        let medians: Vec<f64> = passes.iter().map(|p| median(&p.times)).collect();
        let totals: Vec<f64> = passes.iter().map(|p| p.times.iter().sum::<f64>() * scale).collect();

        let mut worst: Option<f64> = None;
        for (k, &i) in idx.iter().enumerate() {
            if method == Method::Naive && !optimal[i] {
                continue;
            }
            if let (Some(o), Some(r)) = (passes[0].objectives[k], reference[i]) {
                let d = (o - r).abs() / (1.0 + r.abs());
                worst = Some(worst.map_or(d, |w: f64| w.max(d)));
            }
        }
        rows.push(BenchRow {
            method,
            preprocess_seconds: (!pre.is_empty()).then(|| median(&pre)),
            median_per_lambda_seconds: (!sub.is_empty()).then(|| median(&medians)),
            total_seconds: median(&totals),
            evaluated: sub.len(),
            extrapolated,
            max_disagreement: worst,
            agrees: worst.map(|w| w <= AGREEMENT_TOL),
            error: None,
        });
    }

    Ok(BenchReport {
        rows_m: lp.rows(),
        cols_n: lp.cols(),
        lambdas: lambdas.len(),
        basis,
        base_solve_seconds,
        rows,
    })
}
