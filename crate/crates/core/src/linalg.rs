//! Small dense kernels shared by the solver and the warmstart engine.
//!
//! Storage is `nalgebra`'s column-major `DMatrix`. The LU factorization is
//! kept here rather than taken from `nalgebra` because the simplex needs
//! transposed solves against the same factors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct DenseLu {
    n: usize,
    // row-major, L below the diagonal (unit), U on and above
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl DenseLu {
    pub fn factor(a: &DMatrix<f64>) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Dimension {
                field: "lu".into(),
                detail: format!("expected square matrix, got {}x{}", n, a.ncols()),
            });
        }
        let mut lu = vec![0.0; n * n];
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let v = a[(i, j)];
                lu[i * n + j] = v;
                scale = scale.max(v.abs());
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let tiny = scale * f64::EPSILON * 4.0;

        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].abs();
            for i in (k + 1)..n {
                let v = lu[i * n + k].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= tiny || best == 0.0 {
                return Err(Error::Singular(format!("zero pivot in column {k}")));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let (head, tail) = lu.split_at_mut((k + 1) * n);
            let pivot_row = &head[k * n..(k + 1) * n];
            let pivot = pivot_row[k];
            for row in tail.chunks_exact_mut(n) {
                let l = row[k] / pivot;
                row[k] = l;
                if l != 0.0 {
                    for (x, &u) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                        *x -= l * u;
                    }
                }
            }
        }
        Ok(Self { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, y)| l * y).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n..(i + 1) * n];
            let s: f64 = row[i + 1..].iter().zip(&x[i + 1..]).map(|(u, y)| u * y).sum();
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut z = b.to_vec();
        // Uᵀ z = b
        for i in 0..n {
            z[i] /= self.lu[i * n + i];
            let zi = z[i];
            if zi != 0.0 {
                let row = &self.lu[i * n..(i + 1) * n];
                for (zj, u) in z[i + 1..].iter_mut().zip(&row[i + 1..]) {
                    *zj -= u * zi;
                }
            }
        }
        // Lᵀ w = z
        for i in (0..n).rev() {
            let wi = z[i];
            if wi != 0.0 {
                let row = &self.lu[i * n..i * n + i];
                for (zj, l) in z[..i].iter_mut().zip(row) {
                    *zj -= l * wi;
                }
            }
        }
        let mut x = vec![0.0; n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = z[i];
        }
        x
    }

    /// Solves `A X = B` column by column.
    pub fn solve_matrix(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(b.nrows(), b.ncols());
        for j in 0..b.ncols() {
            let col = self.solve(b.column(j).as_slice());
            out.column_mut(j).copy_from_slice(&col);
        }
        out
    }
}

/// Induced ∞-norm (maximum absolute row sum).
pub fn norm_inf(a: &DMatrix<f64>) -> f64 {
    (0..a.nrows())
        .map(|i| a.row(i).iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn cnorm_inf(a: &CMatrix) -> f64 {
    (0..a.nrows())
        .map(|i| a.row(i).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn cnorm_one(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| a.column(j).iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn vec_norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn complexify(a: &DMatrix<f64>) -> CMatrix {
    a.map(|v| Complex64::new(v, 0.0))
}

/// `y = M x` for complex `M` and complex `x`, streaming over columns.
pub fn cmat_vec(m: &CMatrix, x: &[Complex64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); m.nrows()];
    for (j, &xj) in x.iter().enumerate() {
        if xj == Complex64::new(0.0, 0.0) {
            continue;
        }
        for (yi, &mij) in y.iter_mut().zip(m.column(j).iter()) {
            *yi += mij * xj;
        }
    }
    y
}

/// `y = M x` for complex `M` and real `x`.
pub fn cmat_rvec(m: &CMatrix, x: &[f64]) -> Vec<Complex64> {
    let mut y = vec![Complex64::new(0.0, 0.0); m.nrows()];
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        for (yi, &mij) in y.iter_mut().zip(m.column(j).iter()) {
            *yi += mij * xj;
        }
    }
    y
}

/// Row vector times matrix, `w M`, as dot products with the columns of `M`.
pub fn crow_mat(w: &[Complex64], m: &CMatrix) -> Vec<Complex64> {
    (0..m.ncols())
        .map(|j| {
            m.column(j)
                .iter()
                .zip(w)
                .fold(Complex64::new(0.0, 0.0), |acc, (&a, &b)| acc + a * b)
        })
        .collect()
}

pub fn cdot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (&x, &y)| acc + x * y)
}

/// Solves `(I + mu U) y = t` for upper-triangular `U` by back-substitution.
pub fn shifted_upper_solve(u: &CMatrix, mu: f64, t: &[Complex64]) -> Vec<Complex64> {
    let n = u.nrows();
    let mut y = t.to_vec();
    // column-oriented: once y[j] is final, eliminate it from rows above
    for j in (0..n).rev() {
        let d = Complex64::new(1.0, 0.0) + u[(j, j)] * mu;
        y[j] /= d;
        let yj = y[j] * mu;
        if yj != Complex64::new(0.0, 0.0) {
            let col = u.column(j);
            for i in 0..j {
                y[i] -= col[i] * yj;
            }
        }
    }
    y
}

/// Solves the row system `w (I + mu U) = h` for upper-triangular `U`.
pub fn shifted_upper_solve_left(u: &CMatrix, mu: f64, h: &[Complex64]) -> Vec<Complex64> {
    let n = u.nrows();
    let mut w = h.to_vec();
    for j in 0..n {
        let col = u.column(j);
        let s = col
            .iter()
            .take(j)
            .zip(&w[..j])
            .fold(Complex64::new(0.0, 0.0), |acc, (&a, &b)| acc + a * b);
        let d = Complex64::new(1.0, 0.0) + u[(j, j)] * mu;
        w[j] = (w[j] - s * mu) / d;
    }
    w
}

/// Inverse of an upper-triangular complex matrix.
pub fn upper_inverse(u: &CMatrix) -> Result<CMatrix> {
    let n = u.nrows();
    let mut inv = CMatrix::zeros(n, n);
    for j in 0..n {
        if u[(j, j)].norm() == 0.0 {
            return Err(Error::Singular(format!("zero diagonal at {j}")));
        }
    }
    for j in 0..n {
        inv[(j, j)] = Complex64::new(1.0, 0.0) / u[(j, j)];
        for i in (0..j).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for k in (i + 1)..=j {
                s += u[(i, k)] * inv[(k, j)];
            }
            inv[(i, j)] = -s / u[(i, i)];
        }
    }
    Ok(inv)
}
