//! Crate-wide error type.

use thiserror::Error;

/// Source position (1-based line and column) inside a parsed text.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {value} lies outside the carrier of domain {domain}")]
    DomainMismatch { domain: String, value: String },
    #[error("carrier mismatch: {0}")]
    CarrierMismatch(String),
    #[error("grade {grade} is not an element of grading monoid {monoid}")]
    GradeOutsideMonoid { monoid: String, grade: String },
    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),
    #[error("opfunctor law violated: {0}")]
    OpfunctorLawViolation(String),
    #[error("invalid test arrow: {0}")]
    InvalidTestArrow(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("not a preorder: {0}")]
    NotAPreorder(String),
    #[error("assertion is not enumerable: {0}")]
    NonEnumerable(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: Pos, msg: String },
    #[error("type error at {pos}: {msg}")]
    Type { pos: Pos, msg: String },
    #[error("unbound variable `{name}` at {pos}")]
    UnboundVariable { name: String, pos: Pos },
    #[error("evaluation error: {0}")]
    Eval(String),
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("limit exceeded: {0}")]
    Limit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
