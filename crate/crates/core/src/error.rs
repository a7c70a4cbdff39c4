use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("invalid composition: {0}")]
    InvalidComposition(String),
    #[error("slot {slot} out of range for arity {arity}")]
    SlotOutOfRange { slot: usize, arity: usize },
    #[error("unknown letter '{0}'")]
    UnknownLetter(String),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("no assignment for generator '{0}'")]
    MissingGenerator(String),
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("wrong signature: {0}")]
    WrongSignature(String),
    #[error("zero polynomial has no leading monomial")]
    ZeroPolynomial,
    #[error("not an overlap: {0}")]
    NotAnOverlap(String),
    #[error("unsupported arity {0}")]
    UnsupportedArity(usize),
    #[error("generator '{0}' has no sign symmetry")]
    UnknownSymmetry(String),
    #[error("unknown name '{0}'")]
    UnknownName(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
