use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("square size {0} is not supported (need n >= 2)")]
    InvalidSize(usize),
    #[error("size mismatch: expected n = {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("position ({col}, {row}) is outside the formal {n}-square")]
    OutOfRange { col: usize, row: usize, n: usize },
    #[error("duplicate position ({col}, {row})")]
    Duplicate { col: usize, row: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("digit {digit} occurs {count} times, expected {n}")]
    Multiplicity {
        digit: usize,
        count: usize,
        n: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no solution found: {0}")]
    NotFound(String),
    #[error("search budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("n = {0} is outside the supported range for this operation")]
    Unsupported(usize),
    #[error("shuffle source exhausted after {0} steps")]
    SourceExhausted(usize),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
