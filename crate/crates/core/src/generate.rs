//! Seeded random instances for tests, examples and benchmarks. The basis of
//! interest is always the first `m` columns.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::DenseLu;
use crate::model::{Basis, ParametricLP};

#[derive(Debug, Clone)]
pub struct Instance {
    pub lp: ParametricLP,
    pub basis: Basis,
}

fn uniform_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.random_range(lo..hi))
}

fn uniform_vec(rng: &mut ChaCha8Rng, k: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..k).map(|_| rng.random_range(lo..hi)).collect()
}

fn first_columns(m: usize, n: usize) -> Basis {
    Basis::new((0..m).collect(), n).expect("m ≤ n")
}

/// `A`, `D`, `c` uniform on `(−1, 1)`; `b = A_B·x` with `x ∈ (0.5, 1.5)^m`,
/// so the first `m` columns form a feasible basis at λ = 0.
pub fn uniform_instance(m: usize, n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = uniform_matrix(&mut rng, m, n, -1.0, 1.0);
    let d = uniform_matrix(&mut rng, m, n, -1.0, 1.0);
    let c = uniform_vec(&mut rng, n, -1.0, 1.0);
    let x = uniform_vec(&mut rng, m, 0.5, 1.5);
    let b = (a.columns(0, m) * nalgebra::DVector::from_vec(x)).as_slice().to_vec();
    Instance {
        lp: ParametricLP::standard(c, a, d, b).expect("consistent dimensions"),
        basis: first_columns(m, n),
    }
}

/// Like [`uniform_instance`] with `D` scaled by `d_scale` and `c` built
/// from a dual vector so that the first `m` columns are optimal at λ = 0
/// with reduced costs in `(0.1, 1)`.
pub fn optimal_instance(m: usize, n: usize, d_scale: f64, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = uniform_matrix(&mut rng, m, n, -1.0, 1.0);
    let d = uniform_matrix(&mut rng, m, n, -1.0, 1.0) * d_scale;
    let x = uniform_vec(&mut rng, m, 0.5, 1.5);
    let y = nalgebra::DVector::from_vec(uniform_vec(&mut rng, m, -1.0, 1.0));
    let b = (a.columns(0, m) * nalgebra::DVector::from_vec(x)).as_slice().to_vec();
    let aty = a.transpose() * y;
    let c = (0..n)
        .map(|j| if j < m { aty[j] } else { aty[j] + rng.random_range(0.1..1.0) })
        .collect();
    Instance {
        lp: ParametricLP::standard(c, a, d, b).expect("consistent dimensions"),
        basis: first_columns(m, n),
    }
}

/// `A_B = I` and `D_B = S N S⁻¹` with `N` a single nilpotent Jordan chain
/// (unit superdiagonal plus random strictly upper entries) and `S` a random
/// well-conditioned similarity, so `E_B = D_B` is defective.
pub fn jordan_instance(m: usize, n: usize, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nil = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i + 1..m {
            nil[(i, j)] = if j == i + 1 { 1.0 } else { rng.random_range(-0.5..0.5) };
        }
    }
    let s = DMatrix::identity(m, m) + uniform_matrix(&mut rng, m, m, -0.3, 0.3) / (m as f64).sqrt();
    let s_inv = DenseLu::factor(&s).expect("near-identity similarity").solve_matrix(&DMatrix::identity(m, m));
    let d_b = &s * nil * s_inv;

    let mut a = DMatrix::zeros(m, n);
    let mut d = DMatrix::zeros(m, n);
    a.view_mut((0, 0), (m, m)).fill_with_identity();
    d.view_mut((0, 0), (m, m)).copy_from(&d_b);
    if n > m {
        a.view_mut((0, m), (m, n - m)).copy_from(&uniform_matrix(&mut rng, m, n - m, -1.0, 1.0));
        d.view_mut((0, m), (m, n - m)).copy_from(&uniform_matrix(&mut rng, m, n - m, -1.0, 1.0));
    }
    let c = uniform_vec(&mut rng, n, -1.0, 1.0);
    let b = uniform_vec(&mut rng, m, 0.5, 1.5);
    Instance {
        lp: ParametricLP::standard(c, a, d, b).expect("consistent dimensions"),
        basis: first_columns(m, n),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::solve_lp;

    #[test]
    fn optimal_instance_is_optimal_at_zero() {
        for seed in 0..5 {
            let inst = optimal_instance(6, 12, 0.1, seed);
            let r = solve_lp(&inst.lp, 0.0).unwrap();
            let mut got = r.basis.unwrap().indices().to_vec();
            got.sort();
            assert_eq!(got, (0..6).collect::<Vec<_>>());
        }
    }

    #[test]
    fn generators_are_seeded() {
        let a = uniform_instance(4, 8, 7);
        let b = uniform_instance(4, 8, 7);
        assert_eq!(a.lp, b.lp);
        assert_ne!(a.lp, uniform_instance(4, 8, 8).lp);
        let j = jordan_instance(4, 8, 1);
        let d_b = j.lp.d().columns(0, 4).into_owned();
        assert!(crate::linalg::norm_inf(&(&d_b * &d_b * &d_b * &d_b)) < 1e-12);
        assert!(crate::linalg::norm_inf(&(&d_b * &d_b * &d_b)) > 1e-3);
    }
}
