//! Exact arithmetic: rationals, Gaussian rationals, and dense matrices over
//! them with Kronecker products and an exact semidefiniteness test.
//!
//! Nothing in here uses floating point. Every verdict produced by the crate
//! is decided with these types.

mod gaussian;
mod matrix;
mod rational;

pub use gaussian::GaussianRational;
pub use matrix::{Ldl, Matrix};
pub use rational::{ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not hermitian")]
    NotHermitian,
    /// Zero pivot with a nonzero trailing block: no LDL* exists without 2x2 pivots.
    #[error("LDL factorization broke down at step {step}")]
    Breakdown { step: usize },
}

/// Kronecker product of two matrices.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    a.kron(b)
}

/// Exact PSD test. Rejects non-hermitian input.
pub fn is_psd(m: &Matrix) -> Result<bool, LinalgError> {
    m.is_psd()
}
