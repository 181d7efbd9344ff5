use thiserror::Error;

/// Errors produced by the numerical kernels and the physics layers built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("eigenvalue iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix exponential overflow (norm {norm:e})")]
    Overflow { norm: f64 },

    #[error("matrix is singular to working precision (condition estimate {cond:e})")]
    Singular { cond: f64 },

    #[error("matrix is not diagonalizable (eigenvector condition {cond:e})")]
    Defective { cond: f64 },

    #[error("spectrum is not real (max |Im λ| = {max_imag:e})")]
    ComplexSpectrum { max_imag: f64 },

    #[error("metric is not Hermitian positive definite: {0}")]
    InvalidMetric(String),

    #[error("parity operator does not square to the identity (residual {residual:e})")]
    InvalidParity { residual: f64 },

    #[error("operator does not commute with the anti-linear symmetry (residual {residual:e})")]
    NotCommuting { residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("target state not reached within t_max = {t_max} (best fidelity {best_fidelity})")]
    NotFound { t_max: f64, best_fidelity: f64 },

    #[error("schema error in {field}: {message}")]
    Schema { field: String, message: String },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}
