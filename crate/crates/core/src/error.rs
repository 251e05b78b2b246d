use thiserror::Error;

/// Errors raised by the engine. Failed axiom checks are not errors; they are
/// recorded as report entries.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("{0} is not prime (or exceeds 2^31)")]
    NotPrime(u64),
    #[error("no primitive {0}-th root of unity in {1}")]
    NoSuchRoot(u64, String),
    #[error("invalid scalar literal {0:?}")]
    BadScalar(String),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("element is not invertible")]
    NotInvertible,
    #[error("parse error at line {line}, column {column}: {reason}")]
    Parse {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("arity error: {0}")]
    Arity(String),
    #[error("undefined name {0:?} for this datum")]
    UndefinedName(String),
    #[error("datum has no R-matrix")]
    MissingR,
    #[error("datum has no ribbon candidate v")]
    MissingV,
    #[error("invalid twist: {0}")]
    InvalidTwist(String),
    #[error("no invertible element found for this seed")]
    Exhausted,
    #[error("search budget exceeded: {required} points required, budget {budget}")]
    BudgetExceeded { required: String, budget: u64 },
    #[error("internal inconsistency: {0} (the datum likely violates an axiom; re-run the full verifier)")]
    InternalInconsistency(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
