//! Complex Schur decomposition `E = Q U Qᴴ`.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! complex QR sweeps (Wilkinson shift, exceptional shifts every tenth sweep
//! on a stuck block). Working in complex arithmetic gives a truly triangular
//! `U`, with no 2×2 blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cnorm_one, complexify, CMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `E = Q U Qᴴ` with `Q` unitary and `U` upper triangular.
#[derive(Debug, Clone)]
pub struct SchurCache {
    pub q: CMatrix,
    pub u: CMatrix,
}

impl SchurCache {
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.u.diagonal().iter().copied().collect()
    }

    /// `‖Q U Qᴴ − E‖∞`.
    pub fn reconstruction_residual(&self, e: &DMatrix<f64>) -> f64 {
        let rebuilt = &self.q * &self.u * self.q.adjoint();
        crate::linalg::cnorm_inf(&(rebuilt - complexify(e)))
    }

    /// `‖Q Qᴴ − I‖∞`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.q.nrows();
        crate::linalg::cnorm_inf(&(&self.q * self.q.adjoint() - CMatrix::identity(n, n)))
    }
}

/// Default sweep budget: `30·m` QR sweeps.
pub fn default_max_sweeps(m: usize) -> usize {
    30 * m.max(1)
}

pub fn schur_decompose(e: &DMatrix<f64>) -> Result<SchurCache> {
    schur_decompose_with(e, default_max_sweeps(e.nrows()))
}

pub fn schur_decompose_with(e: &DMatrix<f64>, max_sweeps: usize) -> Result<SchurCache> {
    let (q, u) = complex_schur(complexify(e), true, max_sweeps)?;
    Ok(SchurCache { q: q.expect("requested"), u })
}

/// Eigenvalues only (no accumulation of `Q`).
pub fn eigenvalues(e: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    let (_, u) = complex_schur(complexify(e), false, default_max_sweeps(e.nrows()))?;
    Ok(u.diagonal().iter().copied().collect())
}

/// Reduces `a` to triangular form in place and returns `(Q, U)`.
pub fn complex_schur(
    mut h: CMatrix,
    want_q: bool,
    max_sweeps: usize,
) -> Result<(Option<CMatrix>, CMatrix)> {
    let n = h.nrows();
    let mut q = want_q.then(|| CMatrix::identity(n, n));
    hessenberg(&mut h, q.as_mut());
    qr_sweeps(&mut h, q.as_mut(), max_sweeps)?;
    for j in 0..n {
        for i in (j + 1)..n {
            h[(i, j)] = ZERO;
        }
    }
    Ok((q, h))
}

fn hessenberg(a: &mut CMatrix, mut q: Option<&mut CMatrix>) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    let mut s = vec![ZERO; n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        let x: Vec<Complex64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if x[1..].iter().all(|z| *z == ZERO) {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { Complex64::new(1.0, 0.0) };
        let alpha = -phase * xnorm;
        v[..len].copy_from_slice(&x);
        v[0] -= alpha;
        let vnorm = v[..len].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        v[..len].iter_mut().for_each(|z| *z /= vnorm);
        let v = &v[..len];

        // A <- (I - 2vvᴴ) A on rows k+1..
        for j in k..n {
            let mut col = a.column_mut(j);
            let dot = v.iter().enumerate().fold(ZERO, |acc, (i, vi)| acc + vi.conj() * col[k + 1 + i]);
            let dot = dot * 2.0;
            for (i, vi) in v.iter().enumerate() {
                col[k + 1 + i] -= vi * dot;
            }
        }
        a[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
        }
        // A <- A (I - 2vvᴴ) on columns k+1..
        apply_reflector_right(a, v, k + 1, &mut s);
        if let Some(q) = q.as_deref_mut() {
            apply_reflector_right(q, v, k + 1, &mut s);
        }
    }
}

fn apply_reflector_right(a: &mut CMatrix, v: &[Complex64], offset: usize, s: &mut [Complex64]) {
    let rows = a.nrows();
    s[..rows].iter_mut().for_each(|z| *z = ZERO);
    for (t, vt) in v.iter().enumerate() {
        for (si, &aij) in s.iter_mut().zip(a.column(offset + t).iter()) {
            *si += aij * vt;
        }
    }
    for (t, vt) in v.iter().enumerate() {
        let f = vt.conj() * 2.0;
        for (aij, si) in a.column_mut(offset + t).iter_mut().zip(s.iter()) {
            *aij -= si * f;
        }
    }
}

/// Unitary rotation `[c s; -s̄ c]` mapping `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64, Complex64) {
    if g == ZERO {
        return (1.0, ZERO, f);
    }
    let fa = f.norm();
    let ga = g.norm();
    if fa == 0.0 {
        return (0.0, g.conj() / ga, Complex64::new(ga, 0.0));
    }
    let norm = fa.hypot(ga);
    let phase = f / fa;
    (fa / norm, phase * g.conj() / norm, phase * norm)
}

fn rotate_rows(h: &mut CMatrix, i: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
    for j in cols {
        let a = h[(i, j)];
        let b = h[(i + 1, j)];
        h[(i, j)] = a * c + s * b;
        h[(i + 1, j)] = b * c - s.conj() * a;
    }
}

fn rotate_cols(h: &mut CMatrix, j: usize, c: f64, s: Complex64, rows: usize) {
    let (mut left, mut right) = h.columns_range_pair_mut(j, j + 1);
    for i in 0..rows {
        let a = left[i];
        let b = right[i];
        left[i] = a * c + s.conj() * b;
        right[i] = b * c - s * a;
    }
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let s1 = mean + disc;
    let s2 = mean - disc;
    if (s1 - d).norm() <= (s2 - d).norm() {
        s1
    } else {
        s2
    }
}

fn qr_sweeps(h: &mut CMatrix, mut q: Option<&mut CMatrix>, max_sweeps: usize) -> Result<()> {
    let n = h.nrows();
    if n < 2 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let hnorm = cnorm_one(h).max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut stuck = 0usize;
    let mut sweeps = 0usize;

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let mut scale = h[(lo - 1, lo - 1)].l1_norm() + h[(lo, lo)].l1_norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if h[(lo, lo - 1)].l1_norm() <= eps * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stuck = 0;
            continue;
        }

        sweeps += 1;
        stuck += 1;
        if sweeps > max_sweeps {
            return Err(Error::NoConvergence { sweeps: max_sweeps });
        }

        let shift = if stuck % 10 == 0 {
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].re.abs()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        let mut f = h[(lo, lo)] - shift;
        let mut g = h[(lo + 1, lo)];
        for k in lo..hi {
            if k > lo {
                f = h[(k, k - 1)];
                g = h[(k + 1, k - 1)];
            }
            let (c, s, r) = givens(f, g);
            if k > lo {
                h[(k, k - 1)] = r;
                h[(k + 1, k - 1)] = ZERO;
            }
            rotate_rows(h, k, c, s, k..n);
            rotate_cols(h, k, c, s, (k + 3).min(hi + 1));
            if let Some(q) = q.as_deref_mut() {
                rotate_cols(q, k, c, s, n);
            }
        }
    }
    Ok(())
}
