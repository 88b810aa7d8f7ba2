use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("computation budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("pole at {at}")]
    Pole { at: String },

    #[error("operation undefined for the zero function")]
    ZeroFunction,

    #[error("singular Gram matrix (k = {k}, d = {d})")]
    SingularMatrix { k: usize, d: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("parse error: {0}")]
    Parse(String),
}
