use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("enumeration size {n} exceeds the configured cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition is not noncrossing")]
    NotNoncrossing,

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("block index {index} out of range for {len} blocks")]
    InvalidIndex { index: usize, len: usize },

    #[error("empty block")]
    EmptyBlock,

    #[error("cumulant sequence too short: need order {needed}, have {available}")]
    TruncationTooShort { needed: usize, available: usize },

    #[error("series precondition violated: {0}")]
    SeriesPrecondition(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("coloring inconsistent with word: {0}")]
    InconsistentColoring(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown spectral law or cumulant spec `{0}`")]
    UnknownLaw(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
