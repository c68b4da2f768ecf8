use thiserror::Error;

/// Errors produced while building or analysing factor graphs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("expected {expected} entries, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("potential `{0}` is not strictly positive")]
    NonPositivePotential(String),

    #[error("`{0}` is not a decimal number")]
    InvalidPotential(String),

    #[error("argument `{0}` appears more than once")]
    DuplicateArgument(String),

    #[error("factor needs at least one argument")]
    EmptyArguments,

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("argument position {position} is out of range for arity {arity}")]
    InvalidSubset { position: usize, arity: usize },

    #[error("not a permutation of {arity} argument positions")]
    InvalidPermutation { arity: usize },

    #[error("factor is not commutative with respect to the given arguments")]
    NotCommutative,

    #[error("a counted argument set needs at least two members, got {0}")]
    SubsetTooSmall(usize),

    #[error("arguments in the subset do not share one range")]
    MixedRanges,

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown factor `{0}`")]
    UnknownFactor(String),

    #[error("name `{0}` is declared more than once")]
    DuplicateName(String),

    #[error("variable `{name}`: {reason}")]
    InvalidRange { name: String, reason: String },

    #[error("variable `{name}` has evidence `{value}` outside its range")]
    InvalidEvidence { name: String, value: String },

    #[error("factor arity {arity} exceeds the canonicalization limit {limit}")]
    ArityLimitExceeded { arity: usize, limit: usize },

    #[error("invalid number of commutative arguments: {0}")]
    InvalidK(String),

    #[error("invalid benchmark configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
