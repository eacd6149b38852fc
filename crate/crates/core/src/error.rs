use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a complete mapping: {0}")]
    NotCompleteMapping(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("operation requires an abelian group")]
    NotAbelian,
    #[error("group order {order} exceeds the enumeration guard {guard}")]
    GuardExceeded { order: usize, guard: usize },
    #[error("unknown identifier: {0}")]
    Unknown(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
