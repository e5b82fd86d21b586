//! Spectral factorizations of `E_B = A_B⁻¹ D_B`.

mod eigen;
mod schur;
mod tweak;

pub use eigen::{eigen_decompose, eigen_decompose_with, EigenCache, DEFAULT_COND_THRESHOLD};
pub use schur::{
    complex_schur, default_max_sweeps, eigenvalues, schur_decompose, schur_decompose_with,
    SchurCache,
};
pub use tweak::{
    bordered_matrix, tweaked_assemble, tweaked_assemble_with, TweakCache, DEFAULT_MAX_RETRIES,
};

/// Reconstruction tolerance for an `m×m` factorization.
pub fn default_tol_recon(m: usize) -> f64 {
    1e-8 * m.max(1) as f64
}
