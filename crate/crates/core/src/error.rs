use thiserror::Error;

/// Errors raised by tensor construction, the numerical kernels and the
/// generalized-inverse routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape signature: {0}")]
    InvalidSignature(String),

    #[error("{op}: operand orders differ ({left} modes vs {right} modes)")]
    OrderMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },

    #[error("{op}: mode {mode} differs ({left} vs {right})")]
    ShapeMismatch {
        op: &'static str,
        mode: usize,
        left: usize,
        right: usize,
    },

    #[error("expected {expected} entries, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("entry {index} is not finite")]
    NonFinite { index: usize },

    #[error("{routine} did not converge within {iterations} sweeps")]
    NoConvergence {
        routine: &'static str,
        iterations: usize,
    },

    #[error("matrix is not Hermitian (relative deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("tensor is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("factor is not unitary (deviation {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("diagonal entry {index} is not positive ({value})")]
    NonPositiveDiagonal { index: usize, value: f64 },

    #[error(
        "matrix is singular to working precision (smallest singular value {min_singular_value:e})"
    )]
    Singular { min_singular_value: f64 },

    #[error("expected a square operand: {0}")]
    NotSquare(String),

    #[error("invalid instance profile: {0}")]
    InvalidProfile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
