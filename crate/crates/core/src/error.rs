//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data failed validation (non-finite entries, empty dimensions).
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// Shapes of related arrays disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A lambda grid cannot be anchored (e.g. `X^T y = 0` or `y = 0`).
    #[error("degenerate lambda grid: {0}")]
    DegenerateGrid(String),

    /// The square-root lasso residual collapsed to zero (exact interpolation).
    #[error("degenerate fit: residual collapsed to zero (interpolation)")]
    InterpolatedFit,

    /// The degrees-of-freedom adjusted estimator is undefined: the fitted
    /// support is as large as the sample.
    #[error("variance estimate undefined: {nnz} nonzero coefficients with n = {n}")]
    SaturatedFit { nnz: usize, n: usize },

    /// An argument violates a documented precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A simulation specification is infeasible or degenerate.
    #[error("invalid simulation spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
