//! Dense two-phase revised simplex for `min cᵀx s.t. (A + λD)x = b, x ≥ 0`.
//!
//! The basis matrix is refactorized from scratch at every iteration. Pricing
//! uses Dantzig's rule and switches to Bland's rule after a streak of
//! degenerate pivots, so the method cannot cycle.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{vec_norm_inf, DenseLu};
use crate::model::{Basis, ParametricLP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl std::fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub tol_res: f64,
    pub tol_feas: f64,
    pub tol_opt: f64,
    /// Smallest direction entry accepted in the ratio test.
    pub tol_pivot: f64,
    /// Degenerate pivots in a row before switching to Bland's rule.
    pub bland_after: usize,
    pub max_iterations: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        Self {
            tol_res: 1e-9,
            tol_feas: 1e-9,
            tol_opt: 1e-9,
            tol_pivot: 1e-9,
            bland_after: 50,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub x: Option<Vec<f64>>,
    pub objective: Option<f64>,
    pub basis: Option<Basis>,
    pub iterations: usize,
}

impl SolveResult {
    fn without_solution(status: SolveStatus, iterations: usize) -> Self {
        Self { status, x: None, objective: None, basis: None, iterations }
    }
}

pub fn solve_lp(lp: &ParametricLP, lambda: f64) -> Result<SolveResult> {
    solve_lp_with(lp, lambda, &SimplexOptions::default(), None)
}

/// Solves `P(lambda)`. When `hint` is a basis that is primal feasible at
/// `lambda`, phase 1 is skipped and phase 2 starts from it.
pub fn solve_lp_with(
    lp: &ParametricLP,
    lambda: f64,
    opts: &SimplexOptions,
    hint: Option<&Basis>,
) -> Result<SolveResult> {
    if !lp.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let mut tableau = Revised::new(lp.matrix_at(lambda), lp.b().to_vec(), opts);
    let m = tableau.m;
    let n = tableau.n;

    let mut basis = hint
        .filter(|h| h.len() == m && h.indices().iter().all(|&j| j < n))
        .and_then(|h| tableau.feasible_start(h.indices()));

    if basis.is_none() {
        let mut start: Vec<usize> = (n..n + m).collect();
        let mut cost = vec![0.0; n + m];
        cost[n..].iter_mut().for_each(|c| *c = 1.0);
        if tableau.run(&mut start, &cost)? == Outcome::Unbounded {
            return Err(Error::Numerical("phase 1 reported unbounded".into()));
        }
        let residual: f64 = tableau
            .basic_values(&start)?
            .iter()
            .zip(&start)
            .filter(|(_, &j)| j >= n)
            .map(|(v, _)| v.max(0.0))
            .sum();
        let b_scale = 1.0 + tableau.b.iter().map(|v| v.abs()).sum::<f64>();
        if residual > opts.tol_feas * b_scale {
            return Ok(SolveResult::without_solution(SolveStatus::Infeasible, tableau.iterations));
        }
        tableau.drive_out_artificials(&mut start)?;
        basis = Some(start);
    }

    let mut basis = basis.expect("phase 1 produced a basis");
    let mut cost = lp.c().to_vec();
    cost.extend(std::iter::repeat(0.0).take(m));
    if tableau.run(&mut basis, &cost)? == Outcome::Unbounded {
        return Ok(SolveResult::without_solution(SolveStatus::Unbounded, tableau.iterations));
    }

    let values = tableau.basic_values(&basis)?;
    let mut x = vec![0.0; n];
    for (&j, &v) in basis.iter().zip(&values) {
        x[j] = v;
    }
    let objective = lp.c().iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(SolveResult {
        status: SolveStatus::Optimal,
        x: Some(x),
        objective: Some(objective),
        basis: Some(Basis::new(basis, n)?),
        iterations: tableau.iterations,
    })
}

pub fn optimal_basis(result: &SolveResult) -> Result<Basis> {
    match (&result.status, &result.basis) {
        (SolveStatus::Optimal, Some(b)) => Ok(b.clone()),
        _ => Err(Error::NotOptimal),
    }
}

#[derive(Debug, PartialEq, Eq)]
enum Outcome {
    Optimal,
    Unbounded,
}

/// Working state: the constraint matrix at a fixed λ plus `m` artificial
/// columns `sign(b_i)·e_i` (indices `n..n+m`), so artificials start at `|b|`.
struct Revised<'a> {
    mat: DMatrix<f64>,
    b: Vec<f64>,
    m: usize,
    n: usize,
    opts: &'a SimplexOptions,
    iterations: usize,
}

impl<'a> Revised<'a> {
    fn new(mat: DMatrix<f64>, b: Vec<f64>, opts: &'a SimplexOptions) -> Self {
        let (m, n) = mat.shape();
        Self { mat, b, m, n, opts, iterations: 0 }
    }

    fn column(&self, j: usize) -> Vec<f64> {
        if j < self.n {
            self.mat.column(j).iter().copied().collect()
        } else {
            let mut e = vec![0.0; self.m];
            let row = j - self.n;
            e[row] = if self.b[row] < 0.0 { -1.0 } else { 1.0 };
            e
        }
    }

    fn dot_column(&self, y: &[f64], j: usize) -> f64 {
        if j < self.n {
            self.mat.column(j).iter().zip(y).map(|(a, b)| a * b).sum()
        } else {
            let row = j - self.n;
            if self.b[row] < 0.0 {
                -y[row]
            } else {
                y[row]
            }
        }
    }

    fn factor(&self, basis: &[usize]) -> Result<DenseLu> {
        let mut bm = DMatrix::zeros(self.m, self.m);
        for (k, &j) in basis.iter().enumerate() {
            bm.column_mut(k).copy_from_slice(&self.column(j));
        }
        DenseLu::factor(&bm).map_err(|e| Error::Numerical(format!("basis refactorization: {e}")))
    }

    fn basic_values(&self, basis: &[usize]) -> Result<Vec<f64>> {
        Ok(self.factor(basis)?.solve(&self.b))
    }

    fn feasible_start(&self, basis: &[usize]) -> Option<Vec<usize>> {
        let lu = self.factor(basis).ok()?;
        let x = lu.solve(&self.b);
        let tol = self.opts.tol_feas * (1.0 + vec_norm_inf(&self.b));
        x.iter().all(|&v| v >= -tol).then(|| basis.to_vec())
    }

    fn run(&mut self, basis: &mut [usize], cost: &[f64]) -> Result<Outcome> {
        let mut in_basis = vec![false; self.n + self.m];
        for &j in basis.iter() {
            in_basis[j] = true;
        }
        let mut degenerate_streak = 0usize;
        loop {
            let lu = self.factor(basis)?;
            let x_b = lu.solve(&self.b);
            let c_b: Vec<f64> = basis.iter().map(|&j| cost[j]).collect();
            let y = lu.solve_transpose(&c_b);

            // artificials never re-enter
            let bland = degenerate_streak > self.opts.bland_after;
            let mut entering = None;
            let mut best = -self.opts.tol_opt;
            for j in (0..self.n).filter(|&j| !in_basis[j]) {
                let r = cost[j] - self.dot_column(&y, j);
                if r < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = r;
                }
            }
            let Some(q) = entering else {
                return Ok(Outcome::Optimal);
            };

            let dir = lu.solve(&self.column(q));
            let mut leave: Option<(usize, f64)> = None;
            for (i, &di) in dir.iter().enumerate() {
                if di <= self.opts.tol_pivot {
                    continue;
                }
                let t = x_b[i].max(0.0) / di;
                leave = match leave {
                    None => Some((i, t)),
                    Some((r, best_t)) => {
                        let tie = (t - best_t).abs() <= 1e-12 * (1.0 + best_t);
                        if t < best_t && !tie || tie && basis[i] < basis[r] {
                            Some((i, t))
                        } else {
                            Some((r, best_t))
                        }
                    }
                };
            }
            let Some((r, step)) = leave else {
                return Ok(Outcome::Unbounded);
            };

            if step <= self.opts.tol_feas {
                degenerate_streak += 1;
            } else {
                degenerate_streak = 0;
            }
            in_basis[basis[r]] = false;
            in_basis[q] = true;
            basis[r] = q;

            self.iterations += 1;
            if self.iterations > self.opts.max_iterations {
                return Err(Error::Numerical(format!(
                    "iteration limit {} reached",
                    self.opts.max_iterations
                )));
            }
        }
    }

    /// Pivots zero-level artificials out of a phase-1 optimal basis.
    fn drive_out_artificials(&mut self, basis: &mut [usize]) -> Result<()> {
        for r in 0..self.m {
            if basis[r] < self.n {
                continue;
            }
            let lu = self.factor(basis)?;
            let mut e = vec![0.0; self.m];
            e[r] = 1.0;
            let rho = lu.solve_transpose(&e);
            let mut in_basis = vec![false; self.n];
            for &j in basis.iter().filter(|&&j| j < self.n) {
                in_basis[j] = true;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in (0..self.n).filter(|&j| !in_basis[j]) {
                let alpha = self.dot_column(&rho, j).abs();
                if alpha > 1e-7 && best.is_none_or(|(_, a)| alpha > a) {
                    best = Some((j, alpha));
                }
            }
            match best {
                Some((j, _)) => {
                    basis[r] = j;
                    self.iterations += 1;
                }
                None => {
                    return Err(Error::Numerical(format!(
                        "constraint row {r} is linearly dependent on the others"
                    )))
                }
            }
        }
        Ok(())
    }
}
