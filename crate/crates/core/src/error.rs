use thiserror::Error;

/// Errors produced by the arithmetic and algorithmic layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a supported prime modulus (need a prime 2 <= p < 2^62)")]
    NotPrime(u64),

    #[error("operands live in different fields (p = {0} vs p = {1})")]
    ModulusMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular (rank {rank} of {expected})")]
    Singular { rank: usize, expected: usize },

    #[error("degree bound violated: {0}")]
    DegreeBound(String),

    #[error("polynomial must be monic of degree >= 1")]
    NotMonic,

    #[error("matrix has a zero column at index {0}")]
    ZeroColumn(usize),

    #[error("constant coefficient matrix is singular")]
    SingularConstantTerm,

    #[error("kernel has rank {found}, expected {expected}; input is rank deficient")]
    RankDeficient { found: usize, expected: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
