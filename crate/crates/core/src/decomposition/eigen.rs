use nalgebra::DMatrix;
use num_complex::Complex64;

use super::schur::{complex_schur, default_max_sweeps};
use crate::error::{Error, Result};
use crate::linalg::{cnorm_inf, cnorm_one, complexify, upper_inverse, CMatrix};

/// `E = Q Σ Q⁻¹` with `Σ = diag(sigma)`.
#[derive(Debug, Clone)]
pub struct EigenCache {
    pub q: CMatrix,
    pub q_inv: CMatrix,
    pub sigma: Vec<Complex64>,
    /// 1-norm condition number of the eigenvector matrix.
    pub q_cond: f64,
}

impl EigenCache {
    pub fn reconstruction_residual(&self, e: &DMatrix<f64>) -> f64 {
        let mut scaled = self.q.clone();
        for (j, s) in self.sigma.iter().enumerate() {
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= s);
        }
        cnorm_inf(&(scaled * &self.q_inv - complexify(e)))
    }
}

pub const DEFAULT_COND_THRESHOLD: f64 = 1e12;

pub fn eigen_decompose(e: &DMatrix<f64>) -> Result<EigenCache> {
    eigen_decompose_with(e, DEFAULT_COND_THRESHOLD, default_max_sweeps(e.nrows()))
}

/// Eigendecomposition through the complex Schur form: the eigenvectors of
/// the triangular factor `U` are found by back-substitution (`U V = V Σ`,
/// `V` upper triangular), and `Q = Q_schur V`. Since `Q_schur` is unitary,
/// the conditioning of `Q` is that of `V`, which is what the defectiveness
/// test measures.
pub fn eigen_decompose_with(
    e: &DMatrix<f64>,
    cond_threshold: f64,
    max_sweeps: usize,
) -> Result<EigenCache> {
    let n = e.nrows();
    let (qs, u) = complex_schur(complexify(e), true, max_sweeps)?;
    let qs = qs.expect("requested");
    let sigma: Vec<Complex64> = u.diagonal().iter().copied().collect();

    let unorm = u.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let smin = (f64::EPSILON * unorm).max(f64::MIN_POSITIVE);
    let defective = |cond: f64| Error::Defective { cond, threshold: cond_threshold };

    let mut v = CMatrix::zeros(n, n);
    for k in 0..n {
        v[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in (i + 1)..=k {
                s += u[(i, j)] * v[(j, k)];
            }
            let mut d = u[(i, i)] - sigma[k];
            if d.norm() < smin {
                d = Complex64::new(smin, 0.0);
            }
            v[(i, k)] = -s / d;
        }
        let norm = v.column(k).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !norm.is_finite() {
            return Err(defective(f64::INFINITY));
        }
        v.column_mut(k).iter_mut().for_each(|z| *z /= norm);
    }

    let v_inv = upper_inverse(&v).map_err(|_| defective(f64::INFINITY))?;
    let q_cond = cnorm_one(&v) * cnorm_one(&v_inv);
    if !q_cond.is_finite() || q_cond > cond_threshold {
        return Err(defective(q_cond));
    }
    let q = &qs * &v;
    let q_inv = v_inv * qs.adjoint();
    Ok(EigenCache { q, q_inv, sigma, q_cond })
}
