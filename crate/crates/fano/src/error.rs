use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanoError {
    #[error("basis error: {0}")]
    Basis(String),
    #[error("coindex {0} is not supported (at most 3)")]
    UnsupportedCoindex(i64),
    #[error("parity error: {0}")]
    Parity(String),
    #[error("arity error: expected {expected} classes, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("not Fano: sum of degrees {degrees} is at least sum of weights {weights}")]
    NotFano { degrees: u64, weights: u64 },
    #[error("inconsistent candidate: {0}")]
    InconsistentCandidate(String),
    #[error("genus is only defined for index n-2, got index {index} in dimension {dim}")]
    GenusUndefined { dim: u32, index: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("catalog error: {0}")]
    Catalog(String),
}

pub type Result<T> = std::result::Result<T, FanoError>;
