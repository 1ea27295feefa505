use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("generator index g{} out of range (presentation has {} generators)", .0 + 1, .1)]
    IndexOutOfRange(usize, usize),

    #[error("relative order {0} is not a power of two between 2 and 2^31")]
    BadRelativeOrder(u64),

    #[error("relation for g{} has right-hand side referencing g{}, which is not a later generator", .gen + 1, .offender + 1)]
    RhsIndexNotLater { gen: usize, offender: usize },

    #[error("collection exceeded its rewrite budget of {0} steps (malformed presentation?)")]
    CollectBudget(u64),

    #[error("exponent overflow during collection; reduce literal exponents in the input word")]
    ExponentOverflow,

    #[error("operation requires a consistent presentation")]
    Inconsistent,

    #[error("elements belong to different presentations")]
    PresentationMismatch,

    #[error("expected {expected} generator images, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("group order {order} exceeds the ceiling {ceiling} for this operation")]
    OrderCeiling { order: u64, ceiling: u64 },

    #[error("search budget exhausted after visiting {visited} nodes")]
    SearchBudget { visited: u64 },

    #[error("extension solution space has 2^{dim} candidates, exceeding the cap of 2^{cap}")]
    ExtensionBlowup { dim: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Syntax or semantic error in the PCP text format, with source position.
#[derive(Debug, Clone, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

pub type Result<T> = std::result::Result<T, Error>;
