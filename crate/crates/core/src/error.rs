use thiserror::Error;

/// Errors raised by the matrix kernels, channel algebra and analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eig:e})")]
    NotPsd { min_eig: f64 },

    #[error("{routine} did not converge within {budget} iterations")]
    NoConvergence { routine: &'static str, budget: usize },

    #[error("invalid Schatten order p = {0}; expected p >= 1")]
    InvalidOrder(f64),

    #[error("matrix norm {norm:e} exceeds the exponential guard bound {bound:e}")]
    Overflow { norm: f64, bound: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("I - phi*(I) is not positive semidefinite (minimum eigenvalue {min_eig:e})")]
    NormExceedsOne { min_eig: f64 },

    #[error("map is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("density matrix is singular (minimum eigenvalue {min_eig:e})")]
    SingularDensity { min_eig: f64 },

    #[error("invalid weight matrix: {0}")]
    BadWeights(String),

    #[error("invalid density: {0}")]
    BadDensity(String),

    #[error("projections do not form an orthogonal decomposition of unity: {0}")]
    NotADecomposition(String),

    #[error("unitaries do not form a group: {0}")]
    NotAGroup(String),

    #[error("map is not self-adjoint (residual {residual:e})")]
    NotSelfAdjointMap { residual: f64 },

    #[error("map is not ergodic: {0}")]
    NotErgodic(String),

    #[error("unknown property '{0}'")]
    UnknownProperty(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
