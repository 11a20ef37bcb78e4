//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while parsing, translating, checking or
/// enumerating.
#[derive(Debug, Error)]
pub enum Error {
    /// Surface syntax could not be parsed.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    /// An expression was used at the wrong sort.
    #[error("sort error: {0}")]
    Sort(String),

    /// A product of two non-constant terms, or a division by a non-constant.
    #[error("nonlinear term: {0}")]
    Nonlinear(String),

    /// A program violates a structural requirement.
    #[error("malformed program: {0}")]
    Program(String),

    /// A temporal formula violates a structural requirement.
    #[error("malformed formula: {0}")]
    Formula(String),

    /// A clause violates a well-formedness condition.
    #[error("malformed clause: {0}")]
    Clause(String),

    /// A predicate was used without being declared.
    #[error("unknown predicate `{0}`")]
    UnknownPredicate(String),

    /// A domain is missing, empty or has values of the wrong sort.
    #[error("domain error: {0}")]
    Domain(String),

    /// Explicit-state expansion would exceed the configured state cap.
    #[error("state space of {estimate} states exceeds the cap of {cap}")]
    StateCap { estimate: u128, cap: usize },

    /// A bounded search ran out of budget before reaching a verdict.
    #[error("search cap exceeded: {0}")]
    CapExceeded(String),

    /// A hole specification or hole resolution is invalid.
    #[error("hole error: {0}")]
    Hole(String),

    /// An interpretation does not fit the predicates it is meant to interpret.
    #[error("interpretation error: {0}")]
    Interpretation(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
