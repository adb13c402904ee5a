use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Adaptive quadrature exhausted its refinement budget. Carries the last
    /// estimate (Frobenius norm) and the remaining error gap so callers can
    /// decide whether the partial result is usable.
    #[error("quadrature did not converge: estimate norm {estimate_norm:.6e}, remaining gap {gap:.6e} > target {target:.6e}")]
    NonConvergence {
        estimate_norm: f64,
        gap: f64,
        target: f64,
    },

    #[error("matrix is not Hermitian: asymmetry {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("matrix is not an orthogonal projection: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotProjection { defect: f64, tol: f64 },

    #[error("argument outside the admissible domain: {0}")]
    DomainError(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unknown density '{0}'")]
    UnknownDensity(String),

    #[error("unknown symbol '{0}'")]
    UnknownSymbol(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("reproducing-kernel Gram matrix is numerically singular (condition number {cond:.3e} > 1e12)")]
    SingularGram { cond: f64 },

    #[error("bad grid size: {0}")]
    BadGridSize(String),

    #[error("config error at {path}: {message}")]
    ConfigError { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
