use thiserror::Error;

/// Errors raised by the constructors and checks in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degree {k} out of range for dimension {n}: {reason}")]
    BadDegree { n: usize, k: usize, reason: &'static str },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not hermitian (asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },

    #[error("map is not surjective (rank {rank} < {codim}, residual {residual:.3e})")]
    NotSurjective { rank: usize, codim: usize, residual: f64 },

    #[error("map is not a conformal projection (residual {residual:.3e} > tolerance {tolerance:.1e})")]
    NotConformal { residual: f64, tolerance: f64 },

    #[error("covector must be nonzero")]
    ZeroCovector,

    #[error("covector is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("section vanishes at the evaluation point")]
    ZeroSection,

    #[error("operator has zero restriction")]
    ZeroOperator,

    #[error("invalid constants: {0}")]
    BadConstants(String),

    #[error("unknown operator name `{0}`")]
    UnknownName(String),

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("field fiber does not match operator fiber")]
    FiberMismatch,

    #[error("invalid sample count: {0}")]
    BadSampleCount(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
