use thiserror::Error;

/// Errors raised by the finite-window machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("window elements must be strictly increasing: {0:?}")]
    InvalidWindow(Vec<i64>),

    #[error("tuple entries must be pairwise distinct: {0:?}")]
    NonInjectiveTuple(Vec<i64>),

    #[error("tuple has arity {found}, expected {expected}")]
    TupleLength { expected: usize, found: usize },

    #[error("arity {0} is out of range (must be between 2 and {1})")]
    ArityOutOfRange(usize, usize),

    #[error("invalid finite permutation: {0}")]
    InvalidPermutation(String),

    #[error("point {0} would be pulled back outside the configuration window")]
    DomainEscape(i64),

    #[error("expected arity {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("configuration does not determine a linear order")]
    NotALinearOrder,

    #[error("point {0} is not in the window")]
    OutOfWindow(i64),

    #[error("window of size {0} is degenerate for this operation (needs at least 2)")]
    DegenerateWindow(usize),

    #[error("window of size {size} exceeds the bound {bound}")]
    WindowTooLarge { size: usize, bound: usize },

    #[error("window of size {size} is too small (needs at least {needed})")]
    WindowTooSmall { size: usize, needed: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("ground of size {size} is too small (needs at least {needed})")]
    GroundTooSmall { size: usize, needed: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}
