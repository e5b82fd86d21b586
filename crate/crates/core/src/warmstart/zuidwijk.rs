//! Product-formula objective, used as an independent cross-check:
//!
//! ```text
//! o_B(λ) = (1/λ) (∏_j (1 + λβ_j)/(1 + λα_j) − 1)
//! ```
//!
//! with `α_j` the eigenvalues of `A_B⁻¹D_B` and `β_j` those of
//! `A_B⁻¹(D_B + b c_Bᵀ)`. It follows from the determinant lemma applied to
//! `A_B + λD_B + λ b c_Bᵀ`.

use num_complex::Complex64;

use crate::decomposition::eigenvalues;
use crate::error::{Error, Result};
use crate::linalg::DenseLu;
use crate::model::BasisPartition;

#[derive(Debug, Clone)]
pub struct ZuidwijkCache {
    pub alphas: Vec<Complex64>,
    pub betas: Vec<Complex64>,
    /// Pole tolerance `|1 + λα_j|`.
    pub tol_sing: f64,
}

impl ZuidwijkCache {
    /// `Σ(β_j − α_j)`, the λ → 0 limit (equal to `c_Bᵀ x_B(0)` by the trace
    /// of the rank-one term).
    pub fn limit_at_zero(&self) -> Complex64 {
        self.betas.iter().sum::<Complex64>() - self.alphas.iter().sum::<Complex64>()
    }

    fn spectral_radius(&self) -> f64 {
        self.alphas.iter().chain(&self.betas).map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn zuidwijk_preprocess(part: &BasisPartition, b: &[f64]) -> Result<ZuidwijkCache> {
    let lu = DenseLu::factor(&part.a_b).map_err(|_| Error::Singular("A_B is singular".into()))?;
    let e = lu.solve_matrix(&part.d_b);
    let m = part.a_b.nrows();
    let mut perturbed = part.d_b.clone();
    for i in 0..m {
        for j in 0..m {
            perturbed[(i, j)] += b[i] * part.c_b[j];
        }
    }
    let f = lu.solve_matrix(&perturbed);
    Ok(ZuidwijkCache { alphas: eigenvalues(&e)?, betas: eigenvalues(&f)?, tol_sing: 1e-12 })
}

/// `log(1 + z)` without cancellation for small `z`.
fn ln_1p(z: Complex64) -> Complex64 {
    let re = 0.5 * (2.0 * z.re + z.re * z.re + z.im * z.im).ln_1p();
    Complex64::new(re, z.im.atan2(1.0 + z.re))
}

/// `exp(s) − 1` without cancellation for small `s`.
fn exp_m1(s: Complex64) -> Complex64 {
    let half = (0.5 * s.im).sin();
    Complex64::new(
        s.re.exp_m1() * s.im.cos() - 2.0 * half * half,
        s.re.exp() * s.im.sin(),
    )
}

pub fn zuidwijk_objective(z: &ZuidwijkCache, lambda: f64) -> Result<f64> {
    if z.alphas.iter().any(|a| (1.0 + a * lambda).norm() <= z.tol_sing) {
        return Err(Error::SingularLambda { lambda });
    }
    if lambda.abs() * z.spectral_radius() < 1e-12 {
        return Ok(z.limit_at_zero().re);
    }
    if z.betas.iter().any(|b| 1.0 + b * lambda == Complex64::new(0.0, 0.0)) {
        return Ok(-1.0 / lambda);
    }
    let log_ratio: Complex64 = z.betas.iter().map(|b| ln_1p(b * lambda)).sum::<Complex64>()
        - z.alphas.iter().map(|a| ln_1p(a * lambda)).sum::<Complex64>();
    Ok(exp_m1(log_ratio).re / lambda)
}
