//! Bordered ("tweaked") eigendecomposition.
//!
//! A possibly defective `E` is embedded in
//!
//! ```text
//! F = [ E  α ]      G(λ) = I + λF + λ² [ αβ  0 ]
//!     [ β  0 ]                         [ 0   0 ]
//! ```
//!
//! with random `α`, `β`. The leading `m×m` block of `G(λ)⁻¹` is
//! `(I + λE)⁻¹`, and with `F = QΣQ⁻¹` the inverse of `G` reduces to a
//! diagonal plus rank-one system `R(λ) + λ² u vᵀ`, `R(λ) = I + λΣ`,
//! `u vᵀ = Q⁻¹ blockdiag(αβ, 0) Q`, solved with Sherman–Morrison.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::eigen::eigen_decompose_with;
use crate::error::{Error, Result};
use crate::linalg::{cmat_rvec, cnorm_inf, CMatrix};

pub const DEFAULT_MAX_RETRIES: usize = 5;

#[derive(Debug, Clone)]
pub struct TweakCache {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub q: CMatrix,
    pub q_inv: CMatrix,
    pub sigma: Vec<Complex64>,
    /// `u = Q⁻¹ (α; 0)`.
    pub u: Vec<Complex64>,
    /// `vᵀ = (β, 0) Q`.
    pub v: Vec<Complex64>,
    /// Seed of the draw that was kept.
    pub seed: u64,
    pub q_cond: f64,
}

impl TweakCache {
    pub fn bordered(&self, e: &DMatrix<f64>) -> DMatrix<f64> {
        bordered_matrix(e, &self.alpha, &self.beta)
    }

    /// `‖Q Σ Q⁻¹ − F‖∞`.
    pub fn reconstruction_residual(&self, e: &DMatrix<f64>) -> f64 {
        let f = self.bordered(e);
        let mut scaled = self.q.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        cnorm_inf(&(scaled * &self.q_inv - f.map(|x| Complex64::new(x, 0.0))))
    }

    /// `‖u vᵀ − Q⁻¹ blockdiag(αβ, 0) Q‖∞`.
    pub fn rank_one_residual(&self) -> f64 {
        let k = self.sigma.len();
        let m = k - 1;
        let mut border = CMatrix::zeros(k, k);
        for i in 0..m {
            for j in 0..m {
                border[(i, j)] = Complex64::new(self.alpha[i] * self.beta[j], 0.0);
            }
        }
        let target = &self.q_inv * border * &self.q;
        let outer = CMatrix::from_fn(k, k, |i, j| self.u[i] * self.v[j]);
        cnorm_inf(&(outer - target))
    }
}

pub fn bordered_matrix(e: &DMatrix<f64>, alpha: &[f64], beta: &[f64]) -> DMatrix<f64> {
    let m = e.nrows();
    let mut f = DMatrix::zeros(m + 1, m + 1);
    f.view_mut((0, 0), (m, m)).copy_from(e);
    for i in 0..m {
        f[(i, m)] = alpha[i];
        f[(m, i)] = beta[i];
    }
    f
}

fn derived_seed(seed: u64, attempt: usize) -> u64 {
    seed.wrapping_add((attempt as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn unit_normal(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    loop {
        let mut v: Vec<f64> = (0..m).map(|_| StandardNormal.sample(rng)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            return v;
        }
    }
}

pub fn tweaked_assemble(e: &DMatrix<f64>, seed: u64) -> Result<TweakCache> {
    tweaked_assemble_with(
        e,
        seed,
        super::eigen::DEFAULT_COND_THRESHOLD,
        super::schur::default_max_sweeps(e.nrows() + 1),
        DEFAULT_MAX_RETRIES,
    )
}

/// Draws `α`, `β` (i.i.d. standard normal, scaled to unit 2-norm) and
/// eigendecomposes the bordered matrix, redrawing with derived seeds while
/// it stays numerically defective.
pub fn tweaked_assemble_with(
    e: &DMatrix<f64>,
    seed: u64,
    cond_threshold: f64,
    max_sweeps: usize,
    max_retries: usize,
) -> Result<TweakCache> {
    let m = e.nrows();
    for attempt in 0..=max_retries {
        let s = derived_seed(seed, attempt);
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let alpha = unit_normal(&mut rng, m);
        let beta = unit_normal(&mut rng, m);
        let f = bordered_matrix(e, &alpha, &beta);
        match eigen_decompose_with(&f, cond_threshold, max_sweeps) {
            Ok(ec) => {
                let mut padded = alpha.clone();
                padded.push(0.0);
                let u = cmat_rvec(&ec.q_inv, &padded);
                let v = (0..=m)
                    .map(|k| {
                        (0..m).fold(Complex64::new(0.0, 0.0), |acc, i| acc + ec.q[(i, k)] * beta[i])
                    })
                    .collect();
                return Ok(TweakCache {
                    alpha,
                    beta,
                    q: ec.q,
                    q_inv: ec.q_inv,
                    sigma: ec.sigma,
                    u,
                    v,
                    seed: s,
                    q_cond: ec.q_cond,
                });
            }
            Err(Error::Defective { .. }) => continue,
            Err(other) => return Err(other),
        }
    }
    Err(Error::TweakExhausted { retries: max_retries })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jordan_block_becomes_diagonalizable() {
        let e = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        for seed in 0..5 {
            let t = tweaked_assemble(&e, seed).unwrap();
            assert_eq!(t.q.nrows(), 3);
            assert!(t.reconstruction_residual(&e) < 1e-8 * 3.0 * (1.0 + 2.0));
            assert!(t.rank_one_residual() < 1e-8 * 3.0);
        }
    }

    #[test]
    fn seeded_draw_is_reproducible() {
        let e = DMatrix::from_element(1, 1, 0.5);
        let a = tweaked_assemble(&e, 42).unwrap();
        let b = tweaked_assemble(&e, 42).unwrap();
        assert_eq!(a.alpha, b.alpha);
        assert_eq!(a.beta, b.beta);
        assert_eq!(a.sigma, b.sigma);
        assert_eq!(a.q, b.q);
        assert_eq!(a.u, b.u);
        assert_eq!(a.seed, 42);
        let norm: f64 = a.alpha.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_retries_on_hopeless_threshold() {
        let e = DMatrix::from_element(2, 2, 0.0);
        let err = tweaked_assemble_with(&e, 1, 0.5, 100, 2).unwrap_err();
        assert_eq!(err, Error::TweakExhausted { retries: 2 });
    }
}
