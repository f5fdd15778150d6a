use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("recurrence coefficient a_{index} vanishes before degree {degree}")]
    SingularRecurrence { index: usize, degree: usize },

    #[error("block size {block} does not divide matrix size {size}")]
    Partition { block: usize, size: usize },

    #[error("bandwidth {bandwidth} exceeds block size {block}: matrix is not block tridiagonal")]
    NotBlockTridiagonal { bandwidth: usize, block: usize },

    #[error("block A_{index} is ill conditioned (1-norm condition estimate {cond:.3e})")]
    IllConditioned { index: usize, cond: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least {needed} norms for {context}, got {got}")]
    InsufficientData { context: &'static str, needed: usize, got: usize },

    #[error("missing block data: {0}")]
    MissingBlockData(&'static str),

    #[error("matrix fails the stochasticity check: {0}")]
    NotStochastic(String),

    #[error("unknown model '{0}'")]
    UnknownModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
