use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown connective `{0}`")]
    UnknownConnective(String),

    #[error("connective `{name}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid template: {0}")]
    InvalidTemplate(String),

    #[error("size {requested} exceeds the limit {limit}")]
    SizeLimit { requested: usize, limit: usize },

    #[error("signature is not admissible: no connective of arity >= 2, the system is linear")]
    NotAdmissible,

    #[error("singularity solver did not converge: {0}")]
    NoConvergence(String),

    #[error("degenerate branch point: F_yy = {0:e}")]
    DegenerateBranch(f64),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("count table covers sizes up to {available}, need {needed}")]
    TableTooSmall { available: usize, needed: usize },

    #[error("row m = {0} was not retained in the count table")]
    RowNotRetained(usize),

    #[error("class is empty: no {bound} formula of size {size}")]
    EmptyClass { size: usize, bound: String },

    #[error("signature has no {arity}-ary connective named `{name}`")]
    MissingConnective { name: String, arity: usize },

    #[error("expected a sentence, found a formula of openness {0}")]
    NotSentence(usize),

    #[error("constant C_{0} has not been estimated")]
    MissingConstant(usize),
}
