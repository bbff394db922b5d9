use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("materialization cap exceeded: {what} needs {requested} symbols, limit is {limit}")]
    CapExceeded {
        what: String,
        requested: String,
        limit: u64,
    },
    #[error("exponent {k} exceeds the configured maximum {max} for {what}")]
    ExponentTooLarge { what: &'static str, k: u32, max: u32 },
    #[error("work budget exceeded: {cells} cells requested, budget is {budget}")]
    BudgetExceeded { cells: u128, budget: u128 },
    #[error("shift produces a negative index ({index})")]
    NegativeIndex { index: i128 },
    #[error("alignment parts overlap: part {part} starts at ({i}, {j}) before the previous part ended")]
    Overlap { part: usize, i: u64, j: u64 },
    #[error("index {index} out of range for a word of length {len}")]
    IndexOutOfRange { index: u64, len: u64 },
    #[error("invalid symbol {0:?}, expected '0' or '1'")]
    InvalidSymbol(char),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
