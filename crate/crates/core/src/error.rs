use thiserror::Error;

/// Failures reported by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("projection family is invalid: {0}")]
    InvalidProjections(String),

    #[error("non-finite entry encountered in {0}")]
    NonFinite(&'static str),

    #[error("matrix is singular or ill-conditioned (condition number {condition:.3e})")]
    IllConditioned { condition: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    EigenNoConvergence { iterations: usize },

    #[error("spectral decomposition failed: invariant residual {residual:.3e}")]
    Decomposition { residual: f64 },

    #[error("integration did not reach tolerance after {steps} steps (last difference {difference:.3e})")]
    StepLimit { steps: usize, difference: f64 },

    #[error("long-time average not converged: difference {difference:.3e} exceeds {tolerance:.3e}")]
    NotConverged { difference: f64, tolerance: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("no spectral-density entry for alpha={alpha}, beta={beta}, omega={omega}")]
    MissingGamma { alpha: usize, beta: usize, omega: f64 },

    #[error("spectral-density entry at omega={omega} does not match any Bohr frequency")]
    UnknownFrequency { omega: f64 },

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<V, E = Error> = std::result::Result<V, E>;
