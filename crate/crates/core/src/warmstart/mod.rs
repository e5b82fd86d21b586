//! Warmstarted evaluation of `x_B(λ)`, `o_B(λ)` and the reduced costs of a
//! fixed basis for many values of λ.
//!
//! With `E_B = A_B⁻¹D_B` and `x_B(0) = A_B⁻¹b`,
//!
//! ```text
//! x_B(λ) = (I + λE_B)⁻¹ x_B(0)
//! r(λ)   = c_Nᵀ − c_Bᵀ (I + λE_B)⁻¹ A_B⁻¹ (A_N + λD_N)
//! ```
//!
//! Preprocessing factors `E_B` once as `T⁻¹ K T` where `K` is diagonal
//! (eigendecomposition), upper triangular (Schur) or diagonal-plus-rank-one
//! in a bordered space (tweaked). Every per-λ operation afterwards is a
//! solve with `I + λK` plus matrix-vector products: `O(m²)` for solutions
//! and reduced costs, `O(m)` for the eigen and tweaked objectives.
//!
//! A cache may be anchored at `λ₀ ≠ 0`: it then factors the problem with
//! `A' = A + λ₀D` and evaluates at `μ = λ − λ₀`. All public λ arguments are
//! absolute.

mod zuidwijk;

use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::decomposition::{
    eigen_decompose_with, eigenvalues, schur_decompose_with, tweaked_assemble_with,
    default_max_sweeps, DEFAULT_COND_THRESHOLD, DEFAULT_MAX_RETRIES,
};
use crate::error::{Error, Result};
use crate::linalg::{cmat_rvec, cmat_vec, complexify, norm_inf, shifted_upper_solve,
    shifted_upper_solve_left, CMatrix, DenseLu};
use crate::model::{partition, Basis, BasisPartition, ParametricLP};

pub use zuidwijk::{zuidwijk_objective, zuidwijk_preprocess, ZuidwijkCache};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Eigen,
    Schur,
    Tweaked,
    /// Eigen, falling back to [`WarmstartOptions::fallback`] on a defective `E_B`.
    Auto,
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Eigen => "eigen",
            Strategy::Schur => "schur",
            Strategy::Tweaked => "tweaked",
            Strategy::Auto => "auto",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub res: f64,
    pub feas: f64,
    pub opt: f64,
    /// Existence test: `|1 + λν| > sing·(1 + |λ|·‖E_B‖∞)`.
    pub sing: f64,
    pub imag: f64,
    pub cond_threshold: f64,
    /// Tweaked kernel hands over to a dense solve when `|1 + λσ|` or the
    /// Sherman–Morrison denominator drops below this.
    pub tweak_breakdown: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            res: 1e-9,
            feas: 1e-9,
            opt: 1e-9,
            sing: 1e-12,
            imag: 1e-7,
            cond_threshold: DEFAULT_COND_THRESHOLD,
            tweak_breakdown: 1e-6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct WarmstartOptions {
    pub strategy: Strategy,
    /// Used by [`Strategy::Auto`]; must be `Schur` or `Tweaked`.
    pub fallback: Strategy,
    pub tol: Tolerances,
    pub seed: u64,
    pub anchor: f64,
    /// When false, `evaluate` skips the reduced costs and never reports
    /// `Optimal`: feasible points are returned as upper bounds only.
    pub check_optimality: bool,
    pub max_retries: usize,
}

impl Default for WarmstartOptions {
    fn default() -> Self {
        Self {
            strategy: Strategy::Auto,
            fallback: Strategy::Schur,
            tol: Tolerances::default(),
            seed: 0,
            anchor: 0.0,
            check_optimality: true,
            max_retries: DEFAULT_MAX_RETRIES,
        }
    }
}

impl WarmstartOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        Self { strategy, ..Self::default() }
    }
}

/// The per-λ core `(I + μK)⁻¹` in the transformed coordinates.
#[derive(Debug, Clone)]
enum Kernel {
    Diagonal { sigma: Vec<Complex64> },
    Triangular { u: CMatrix },
    Bordered { sigma: Vec<Complex64>, u: Vec<Complex64>, v: Vec<Complex64>, breakdown: f64 },
}

impl Kernel {
    /// `(I + μK)⁻¹ t`, or `None` when the bordered form breaks down at μ.
    fn apply(&self, mu: f64, t: &[Complex64]) -> Option<Vec<Complex64>> {
        match self {
            Kernel::Diagonal { sigma } => Some(
                t.iter().zip(sigma).map(|(ti, s)| ti / (1.0 + s * mu)).collect(),
            ),
            Kernel::Triangular { u } => Some(shifted_upper_solve(u, mu, t)),
            Kernel::Bordered { sigma, u, v, breakdown } => {
                let r = bordered_diag(sigma, mu, *breakdown)?;
                let p: Vec<Complex64> = t.iter().zip(&r).map(|(a, b)| a / b).collect();
                let ru: Vec<Complex64> = u.iter().zip(&r).map(|(a, b)| a / b).collect();
                let den = 1.0 + mu * mu * crate::linalg::cdot(v, &ru);
                if den.norm() < *breakdown {
                    return None;
                }
                let coef = mu * mu * crate::linalg::cdot(v, &p) / den;
                Some(p.iter().zip(&ru).map(|(pi, qi)| pi - qi * coef).collect())
            }
        }
    }

    /// `h (I + μK)⁻¹` for a row vector `h`.
    fn apply_left(&self, mu: f64, h: &[Complex64]) -> Option<Vec<Complex64>> {
        match self {
            Kernel::Diagonal { .. } => self.apply(mu, h),
            Kernel::Triangular { u } => Some(shifted_upper_solve_left(u, mu, h)),
            Kernel::Bordered { sigma, u, v, breakdown } => {
                let r = bordered_diag(sigma, mu, *breakdown)?;
                let a: Vec<Complex64> = h.iter().zip(&r).map(|(x, y)| x / y).collect();
                let ru: Vec<Complex64> = u.iter().zip(&r).map(|(x, y)| x / y).collect();
                let den = 1.0 + mu * mu * crate::linalg::cdot(v, &ru);
                if den.norm() < *breakdown {
                    return None;
                }
                let coef = mu * mu * crate::linalg::cdot(&a, u) / den;
                Some(a.iter().zip(v.iter().zip(&r)).map(|(ai, (vi, ri))| ai - coef * vi / ri).collect())
            }
        }
    }
}

fn bordered_diag(sigma: &[Complex64], mu: f64, breakdown: f64) -> Option<Vec<Complex64>> {
    let r: Vec<Complex64> = sigma.iter().map(|s| 1.0 + s * mu).collect();
    r.iter().all(|z| z.norm() >= breakdown).then_some(r)
}

/// Everything needed to evaluate a basis at any λ in `O(m²)`.
#[derive(Debug, Clone)]
pub struct WarmstartCache {
    strategy: Strategy,
    anchor: f64,
    n: usize,
    partition: BasisPartition,
    e_b: DMatrix<f64>,
    nu: Vec<Complex64>,
    x0: Vec<f64>,
    b: Vec<f64>,
    kernel: Kernel,
    /// `T`: maps `R^m` into the kernel's coordinates (`Q⁻¹`, `Qᴴ`, or the
    /// first `m` columns of `Q_F⁻¹`).
    fwd: CMatrix,
    /// `T⁻¹` restricted to the leading `m` rows.
    back: CMatrix,
    g: Vec<Complex64>,
    h: Vec<Complex64>,
    y: CMatrix,
    z: CMatrix,
    norm_e: f64,
    norm_cb: f64,
    tol: Tolerances,
    check_optimality: bool,
    tweak_seed: Option<u64>,
    q_cond: Option<f64>,
}

static PREPROCESS_CALLS: AtomicUsize = AtomicUsize::new(0);

/// Number of `preprocess` calls made by this process.
pub fn preprocess_calls() -> usize {
    PREPROCESS_CALLS.load(Ordering::Relaxed)
}

pub fn preprocess(
    lp: &ParametricLP,
    basis: &Basis,
    opts: &WarmstartOptions,
) -> Result<WarmstartCache> {
    PREPROCESS_CALLS.fetch_add(1, Ordering::Relaxed);
    if !lp.is_standard_form() {
        return Err(Error::NotStandardForm);
    }
    let shifted = lp.shifted(opts.anchor);
    let part = partition(&shifted, basis)?;
    let m = part.a_b.nrows();
    let lu_b = DenseLu::factor(&part.a_b).map_err(|_| Error::Singular("A_B is singular".into()))?;
    let e_b = lu_b.solve_matrix(&part.d_b);
    let x0 = lu_b.solve(shifted.b());
    let tol = opts.tol;

    let resid_e = norm_inf(&(&part.a_b * &e_b - &part.d_b));
    if resid_e > tol.res * (1.0 + norm_inf(&part.d_b)) * (1.0 + norm_inf(&e_b)) {
        return Err(Error::Numerical(format!("A_B E_B − D_B residual {resid_e:e}")));
    }

    let sweeps = default_max_sweeps(m);
    let strategy = match opts.strategy {
        Strategy::Auto => match eigen_decompose_with(&e_b, tol.cond_threshold, sweeps) {
            Ok(_) => Strategy::Eigen,
            Err(Error::Defective { .. }) => match opts.fallback {
                Strategy::Tweaked => Strategy::Tweaked,
                _ => Strategy::Schur,
            },
            Err(e) => return Err(e),
        },
        s => s,
    };

    let mut tweak_seed = None;
    let mut q_cond = None;
    let (kernel, fwd, back, nu) = match strategy {
        Strategy::Eigen => {
            let ec = eigen_decompose_with(&e_b, tol.cond_threshold, sweeps)?;
            q_cond = Some(ec.q_cond);
            let nu = ec.sigma.clone();
            (Kernel::Diagonal { sigma: ec.sigma }, ec.q_inv, ec.q, nu)
        }
        Strategy::Schur => {
            let sc = schur_decompose_with(&e_b, sweeps)?;
            let nu = sc.eigenvalues();
            let fwd = sc.q.adjoint();
            (Kernel::Triangular { u: sc.u }, fwd, sc.q, nu)
        }
        Strategy::Tweaked => {
            let tc = tweaked_assemble_with(
                &e_b,
                opts.seed,
                tol.cond_threshold,
                default_max_sweeps(m + 1),
                opts.max_retries,
            )?;
            tweak_seed = Some(tc.seed);
            q_cond = Some(tc.q_cond);
            // ν come from E_B itself: F's spectrum is not E_B's.
            let nu = eigenvalues(&e_b)?;
            let fwd = tc.q_inv.columns(0, m).into_owned();
            let back = tc.q.rows(0, m).into_owned();
            let kernel = Kernel::Bordered {
                sigma: tc.sigma,
                u: tc.u,
                v: tc.v,
                breakdown: tol.tweak_breakdown,
            };
            (kernel, fwd, back, nu)
        }
        Strategy::Auto => unreachable!("resolved above"),
    };

    let g = cmat_rvec(&fwd, &x0);
    let h: Vec<Complex64> = (0..back.ncols())
        .map(|k| {
            back.column(k)
                .iter()
                .zip(&part.c_b)
                .fold(Complex64::new(0.0, 0.0), |acc, (q, c)| acc + q * *c)
        })
        .collect();
    let y = &fwd * complexify(&lu_b.solve_matrix(&part.a_n));
    let z = &fwd * complexify(&lu_b.solve_matrix(&part.d_n));

    Ok(WarmstartCache {
        strategy,
        anchor: opts.anchor,
        n: lp.cols(),
        norm_e: norm_inf(&e_b),
        norm_cb: part.c_b.iter().map(|c| c.abs()).sum(),
        partition: part,
        e_b,
        nu,
        x0,
        b: shifted.b().to_vec(),
        kernel,
        fwd,
        back,
        g,
        h,
        y,
        z,
        tol,
        check_optimality: opts.check_optimality,
        tweak_seed,
        q_cond,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalStatus {
    Singular,
    InfeasibleBasis,
    FeasibleSuboptimal,
    Optimal,
}

impl EvalStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            EvalStatus::Singular => "singular",
            EvalStatus::InfeasibleBasis => "infeasible_basis",
            EvalStatus::FeasibleSuboptimal => "feasible_suboptimal",
            EvalStatus::Optimal => "optimal",
        }
    }
}

impl std::fmt::Display for EvalStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub max_imag_residual: f64,
    pub min_x_component: Option<f64>,
    /// `None` when the reduced costs were not computed.
    pub min_reduced_cost: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationResult {
    pub lambda: f64,
    pub status: EvalStatus,
    /// Full-length solution, nonbasic entries exactly zero.
    pub x: Option<Vec<f64>>,
    pub objective: Option<f64>,
    pub diagnostics: Diagnostics,
}

fn realize(v: &[Complex64]) -> (Vec<f64>, f64) {
    let imag = v.iter().fold(0.0f64, |acc, z| acc.max(z.im.abs()));
    (v.iter().map(|z| z.re).collect(), imag)
}

impl WarmstartCache {
    pub fn strategy(&self) -> Strategy {
        self.strategy
    }
    pub fn anchor(&self) -> f64 {
        self.anchor
    }
    pub fn basis(&self) -> &Basis {
        &self.partition.basis
    }
    /// Blocks of the problem at the anchor (`A + λ₀D`).
    pub fn partition(&self) -> &BasisPartition {
        &self.partition
    }
    pub fn e_b(&self) -> &DMatrix<f64> {
        &self.e_b
    }
    /// Eigenvalues `ν_i` of `E_B`.
    pub fn nu(&self) -> &[Complex64] {
        &self.nu
    }
    pub fn x0(&self) -> &[f64] {
        &self.x0
    }
    pub fn norm_e(&self) -> f64 {
        self.norm_e
    }
    /// `Σ|c_B,i|`, the induced ∞-norm of the row `c_Bᵀ`.
    pub fn norm_cb(&self) -> f64 {
        self.norm_cb
    }
    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }
    pub fn rows(&self) -> usize {
        self.x0.len()
    }
    pub fn cols(&self) -> usize {
        self.n
    }
    pub fn tweak_seed(&self) -> Option<u64> {
        self.tweak_seed
    }
    /// Condition estimate of the eigenvector matrix (eigen and tweaked).
    pub fn q_cond(&self) -> Option<f64> {
        self.q_cond
    }

    fn local(&self, lambda: f64) -> f64 {
        lambda - self.anchor
    }

    /// `min_i |1 + μν_i|`, `μ = λ − λ₀`.
    pub fn singularity_margin(&self, lambda: f64) -> f64 {
        let mu = self.local(lambda);
        self.nu.iter().map(|v| (1.0 + v * mu).norm()).fold(f64::INFINITY, f64::min)
    }

    /// True iff `A_B + λD_B` is invertible, tested as `|1 + μν_i| > tol` for
    /// every eigenvalue of `E_B`.
    pub fn check_existence(&self, lambda: f64) -> bool {
        let mu = self.local(lambda);
        let tol = self.tol.sing * (1.0 + mu.abs() * self.norm_e);
        self.singularity_margin(lambda) > tol
    }

    fn require_existence(&self, lambda: f64) -> Result<()> {
        if self.check_existence(lambda) {
            Ok(())
        } else {
            Err(Error::SingularLambda { lambda })
        }
    }

    fn dense_shifted(&self, mu: f64) -> Result<DenseLu> {
        let mat = &self.partition.a_b + &self.partition.d_b * mu;
        DenseLu::factor(&mat).map_err(|_| Error::SingularLambda { lambda: mu + self.anchor })
    }

    /// `(I + μE_B)⁻¹ w` for a real `w`, through the factorization.
    fn resolvent(&self, mu: f64, w: &[f64]) -> Result<(Vec<f64>, f64)> {
        let t = cmat_rvec(&self.fwd, w);
        match self.kernel.apply(mu, &t) {
            Some(s) => Ok(realize(&cmat_vec(&self.back, &s))),
            None => {
                // bordered breakdown: (I + μE)⁻¹ w = (A_B + μD_B)⁻¹ A_B w
                let lu = self.dense_shifted(mu)?;
                let aw: Vec<f64> = (&self.partition.a_b * nalgebra::DVector::from_column_slice(w))
                    .iter()
                    .copied()
                    .collect();
                Ok((lu.solve(&aw), 0.0))
            }
        }
    }

    /// `x_B(λ)` with the largest imaginary component discarded.
    pub fn eval_solution_with_residual(&self, lambda: f64) -> Result<(Vec<f64>, f64)> {
        self.require_existence(lambda)?;
        let mu = self.local(lambda);
        match self.kernel.apply(mu, &self.g) {
            Some(s) => Ok(realize(&cmat_vec(&self.back, &s))),
            None => Ok((self.dense_shifted(mu)?.solve(&self.b), 0.0)),
        }
    }

    pub fn eval_solution(&self, lambda: f64) -> Result<Vec<f64>> {
        self.eval_solution_with_residual(lambda).map(|(x, _)| x)
    }

    /// `o_B(λ) = c_Bᵀ x_B(λ)`; `O(m)` for the eigen and tweaked kernels.
    pub fn eval_objective(&self, lambda: f64) -> Result<f64> {
        self.require_existence(lambda)?;
        let mu = self.local(lambda);
        match self.kernel.apply(mu, &self.g) {
            Some(s) => Ok(crate::linalg::cdot(&self.h, &s).re),
            None => {
                let x = self.dense_shifted(mu)?.solve(&self.b);
                Ok(self.partition.c_b.iter().zip(&x).map(|(c, v)| c * v).sum())
            }
        }
    }

    /// `r(λ) = c_Nᵀ − c_Bᵀ(A_B + λD_B)⁻¹(A_N + λD_N)`, nonbasic columns in
    /// ascending order.
    pub fn reduced_costs(&self, lambda: f64) -> Result<Vec<f64>> {
        self.require_existence(lambda)?;
        let mu = self.local(lambda);
        let Some(w) = self.kernel.apply_left(mu, &self.h) else {
            return self.dense_reduced_costs(mu);
        };
        let part = &self.partition;
        Ok((0..part.c_n.len())
            .map(|j| {
                let s = self
                    .y
                    .column(j)
                    .iter()
                    .zip(self.z.column(j).iter())
                    .zip(&w)
                    .fold(Complex64::new(0.0, 0.0), |acc, ((a, d), wi)| acc + wi * (a + d * mu));
                part.c_n[j] - s.re
            })
            .collect())
    }

    fn dense_reduced_costs(&self, mu: f64) -> Result<Vec<f64>> {
        let part = &self.partition;
        let lu = self.dense_shifted(mu)?;
        let y = lu.solve_transpose(&part.c_b);
        let mat_n = &part.a_n + &part.d_n * mu;
        Ok((0..part.c_n.len())
            .map(|j| part.c_n[j] - mat_n.column(j).iter().zip(&y).map(|(a, b)| a * b).sum::<f64>())
            .collect())
    }

    /// `E_B x`.
    pub fn e_times(&self, x: &[f64]) -> Vec<f64> {
        (&self.e_b * nalgebra::DVector::from_column_slice(x)).iter().copied().collect()
    }

    /// `x_B(λ+δ) − x_B(λ) = −δ (I + (λ+δ)E_B)⁻¹ E_B x_B(λ)`.
    pub fn solution_shift(&self, lambda: f64, delta: f64) -> Result<Vec<f64>> {
        self.require_existence(lambda)?;
        self.require_existence(lambda + delta)?;
        if delta == 0.0 {
            return Ok(vec![0.0; self.rows()]);
        }
        let x = self.eval_solution(lambda)?;
        let ex = self.e_times(&x);
        let (s, _) = self.resolvent(self.local(lambda + delta), &ex)?;
        Ok(s.into_iter().map(|v| -delta * v).collect())
    }

    /// Lifts `x_B` to a full-length vector with zero nonbasic entries.
    pub fn full_solution(&self, x_b: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.n];
        for (&j, &v) in self.partition.basis.indices().iter().zip(x_b) {
            x[j] = v;
        }
        x
    }

    /// Existence, feasibility, optimality, objective and solution at λ.
    pub fn evaluate(&self, lambda: f64) -> EvaluationResult {
        self.evaluate_with(lambda, self.check_optimality)
    }

    pub fn evaluate_with(&self, lambda: f64, check_optimality: bool) -> EvaluationResult {
        let singular = |diagnostics| EvaluationResult {
            lambda,
            status: EvalStatus::Singular,
            x: None,
            objective: None,
            diagnostics,
        };
        if !self.check_existence(lambda) {
            return singular(Diagnostics::default());
        }
        let mu = self.local(lambda);
        let (x_b, objective, imag) = match self.kernel.apply(mu, &self.g) {
            Some(s) => {
                let (x_b, imag) = realize(&cmat_vec(&self.back, &s));
                (x_b, crate::linalg::cdot(&self.h, &s).re, imag)
            }
            None => match self.dense_shifted(mu) {
                Ok(lu) => {
                    let x_b = lu.solve(&self.b);
                    let o = self.partition.c_b.iter().zip(&x_b).map(|(c, v)| c * v).sum();
                    (x_b, o, 0.0)
                }
                Err(_) => return singular(Diagnostics::default()),
            },
        };
        let min_x = x_b.iter().copied().fold(f64::INFINITY, f64::min);
        let mut diagnostics = Diagnostics {
            max_imag_residual: imag,
            min_x_component: Some(min_x),
            min_reduced_cost: None,
        };
        let status = if min_x < -self.tol.feas {
            EvalStatus::InfeasibleBasis
        } else if !check_optimality {
            EvalStatus::FeasibleSuboptimal
        } else {
            let r = self.reduced_costs(lambda).unwrap_or_default();
            let min_r = r.iter().copied().reduce(f64::min);
            diagnostics.min_reduced_cost = min_r;
            if min_r.is_none_or(|v| v >= -self.tol.opt) {
                EvalStatus::Optimal
            } else {
                EvalStatus::FeasibleSuboptimal
            }
        };
        EvaluationResult {
            lambda,
            status,
            x: Some(self.full_solution(&x_b)),
            objective: Some(objective),
            diagnostics,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> ParametricLP {
        ParametricLP::standard(
            vec![1.0],
            DMatrix::from_element(1, 1, 2.0),
            DMatrix::from_element(1, 1, 1.0),
            vec![4.0],
        )
        .unwrap()
    }

    fn p2() -> ParametricLP {
        ParametricLP::standard(
            vec![1.0, 1.0],
            DMatrix::identity(2, 2),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]),
            vec![1.0, 1.0],
        )
        .unwrap()
    }

    fn p4() -> ParametricLP {
        ParametricLP::standard(
            vec![1.0, 3.0],
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            vec![2.0],
        )
        .unwrap()
    }

    fn cache(lp: &ParametricLP, basis: &[usize], strategy: Strategy) -> WarmstartCache {
        let b = Basis::new(basis.to_vec(), lp.cols()).unwrap();
        preprocess(lp, &b, &WarmstartOptions::with_strategy(strategy)).unwrap()
    }

    const ALL: [Strategy; 3] = [Strategy::Eigen, Strategy::Schur, Strategy::Tweaked];

    #[test]
    fn scalar_problem_all_strategies() {
        for s in ALL {
            let c = cache(&p1(), &[0], s);
            assert!((c.e_b()[(0, 0)] - 0.5).abs() < 1e-15);
            assert!((c.nu()[0].re - 0.5).abs() < 1e-14, "{s}");
            assert_eq!(c.x0(), &[2.0]);
            assert!(!c.check_existence(-2.0));
            assert!(c.check_existence(0.0));
            let x = c.eval_solution(1.0).unwrap();
            assert!((x[0] - 4.0 / 3.0).abs() < 1e-14, "{s}: {x:?}");
            assert!((c.eval_objective(1.0).unwrap() - 4.0 / 3.0).abs() < 1e-14);
            assert!((c.eval_objective(0.0).unwrap() - 2.0).abs() < 1e-14);
            assert!((c.eval_solution(0.0).unwrap()[0] - 2.0).abs() < 1e-14);
            assert!(matches!(c.eval_solution(-2.0), Err(Error::SingularLambda { .. })));
            let r = c.evaluate(-2.0);
            assert_eq!(r.status, EvalStatus::Singular);
            assert!(r.x.is_none() && r.objective.is_none());
        }
    }

    #[test]
    fn jordan_basis_needs_schur_or_tweak() {
        let lp = p2();
        let b = Basis::new(vec![0, 1], 2).unwrap();
        let err = preprocess(&lp, &b, &WarmstartOptions::with_strategy(Strategy::Eigen)).unwrap_err();
        assert!(matches!(err, Error::Defective { .. }));
        let auto = preprocess(&lp, &b, &WarmstartOptions::default()).unwrap();
        assert_eq!(auto.strategy(), Strategy::Schur);
        let opts = WarmstartOptions { fallback: Strategy::Tweaked, ..Default::default() };
        assert_eq!(preprocess(&lp, &b, &opts).unwrap().strategy(), Strategy::Tweaked);

        for s in [Strategy::Schur, Strategy::Tweaked] {
            let c = cache(&lp, &[0, 1], s);
            assert!(c.nu().iter().all(|z| z.norm() < 1e-12));
            for lambda in [-100.0, -1.0, 0.5, 3.0, 1e6] {
                assert!(c.check_existence(lambda));
            }
            let x = c.eval_solution(0.5).unwrap();
            assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 1.0).abs() < 1e-12, "{s}: {x:?}");
            assert!((c.eval_objective(0.5).unwrap() - 1.5).abs() < 1e-12);
        }
    }

    #[test]
    fn reduced_costs_track_the_crossing() {
        for s in ALL {
            let c = cache(&p4(), &[0], s);
            for (lambda, want) in [(1.0, 1.0), (2.0, 0.0), (3.0, -1.0)] {
                let r = c.reduced_costs(lambda).unwrap();
                assert!((r[0] - want).abs() < 1e-13, "{s} λ={lambda}: {r:?}");
            }
        }
    }

    #[test]
    fn evaluate_pipeline_statuses() {
        let c = cache(&p4(), &[0], Strategy::Eigen);
        let r1 = c.evaluate(1.0);
        assert_eq!(r1.status, EvalStatus::Optimal);
        assert_eq!(r1.x.as_deref(), Some(&[2.0, 0.0][..]));
        assert!((r1.objective.unwrap() - 2.0).abs() < 1e-14);
        let r3 = c.evaluate(3.0);
        assert_eq!(r3.status, EvalStatus::FeasibleSuboptimal);
        assert!((r3.objective.unwrap() - 2.0).abs() < 1e-14);
        assert!(r3.diagnostics.min_reduced_cost.unwrap() < 0.0);
        let bounds_only = c.evaluate_with(1.0, false);
        assert_eq!(bounds_only.status, EvalStatus::FeasibleSuboptimal);
        assert_eq!(bounds_only.diagnostics.min_reduced_cost, None);
    }

    #[test]
    fn infeasible_basis_is_reported() {
        // x_B(λ) = 4/(2 - λ) turns negative past λ = 2
        let lp = ParametricLP::standard(
            vec![1.0],
            DMatrix::from_element(1, 1, 2.0),
            DMatrix::from_element(1, 1, -1.0),
            vec![4.0],
        )
        .unwrap();
        let c = cache(&lp, &[0], Strategy::Schur);
        assert_eq!(c.evaluate(1.0).status, EvalStatus::Optimal);
        let r = c.evaluate(3.0);
        assert_eq!(r.status, EvalStatus::InfeasibleBasis);
        assert!((r.x.unwrap()[0] + 4.0).abs() < 1e-13);
    }

    #[test]
    fn solution_shift_examples() {
        let c = cache(&p1(), &[0], Strategy::Eigen);
        assert_eq!(c.solution_shift(0.3, 0.0).unwrap(), vec![0.0]);
        let s = c.solution_shift(0.0, 1.0).unwrap();
        assert!((s[0] + 2.0 / 3.0).abs() < 1e-14);
        assert!(c.solution_shift(0.0, -2.0).is_err());
        let c = cache(&p2(), &[0, 1], Strategy::Schur);
        let s = c.solution_shift(0.0, 0.5).unwrap();
        assert!((s[0] + 0.5).abs() < 1e-14 && s[1].abs() < 1e-14);
    }

    #[test]
    fn anchored_cache_matches_unanchored() {
        let lp = p4();
        let b = Basis::new(vec![1], 2).unwrap();
        let anchored = preprocess(
            &lp,
            &b,
            &WarmstartOptions { anchor: 3.0, ..WarmstartOptions::with_strategy(Strategy::Eigen) },
        )
        .unwrap();
        let plain = cache(&lp, &[1], Strategy::Eigen);
        for lambda in [2.5, 3.0, 4.0, 10.0] {
            let a = anchored.eval_objective(lambda).unwrap();
            let p = plain.eval_objective(lambda).unwrap();
            assert!((a - 6.0 / (1.0 + lambda)).abs() < 1e-13 && (a - p).abs() < 1e-13);
        }
        assert!(!anchored.check_existence(-1.0));
        assert_eq!(anchored.evaluate(3.0).status, EvalStatus::Optimal);
        assert_eq!(anchored.evaluate(1.0).status, EvalStatus::FeasibleSuboptimal);
    }

    #[test]
    fn singular_a_b_is_rejected() {
        let lp = ParametricLP::standard(
            vec![1.0, 1.0],
            DMatrix::from_row_slice(1, 2, &[0.0, 1.0]),
            DMatrix::from_row_slice(1, 2, &[1.0, 0.0]),
            vec![1.0],
        )
        .unwrap();
        let b = Basis::new(vec![0], 2).unwrap();
        assert!(matches!(
            preprocess(&lp, &b, &WarmstartOptions::default()),
            Err(Error::Singular(_))
        ));
    }
}
