use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("expected exactly {expected} sets, found {found}")]
    WrongSetCount { expected: usize, found: usize },
    #[error("support points must have nonnegative coordinates")]
    NegativeCoordinate,
    #[error("integrality violation: {0}")]
    IntegralityViolation(String),
    #[error("point not in the tropicalization")]
    NotInTropicalization,
    #[error("point is not regular: {0}")]
    NotRegular(String),
    #[error("containment violated: {0}")]
    ContainmentViolated(String),
    #[error("index {index} not in the chosen subset")]
    IndexNotInSubset { index: usize },
    #[error("subset size must be {expected}, found {found}")]
    WrongSubsetSize { expected: usize, found: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
