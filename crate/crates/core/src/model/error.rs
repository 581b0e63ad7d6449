use thiserror::Error;

use crate::logic::{SignatureError, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("domain must be non-empty")]
    EmptyDomain,
    #[error("domain element `{0}` listed twice")]
    DuplicateElement(String),
    #[error("unknown domain element `{0}`")]
    UnknownElement(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("constant `{0}` has no assigned element")]
    MissingConstant(String),
    #[error("no table for `{0}`")]
    MissingTable(String),
    #[error("table for `{symbol}` is missing the entry for ({entry})")]
    PartialTable { symbol: String, entry: String },
    #[error("`{symbol}` has arity {expected}, got a tuple of length {found}")]
    BadTuple {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("budget exceeded: {what} would require {count} {unit} (limit {limit})")]
    BudgetExceeded {
        what: String,
        count: u128,
        unit: &'static str,
        limit: u128,
    },
    #[error("predicate terms need designated true/false elements")]
    NoDesignatedElements,
    #[error("variable `{0}` is free and unassigned")]
    FreeVariable(String),
    #[error("domain size {given} is too small; at least {needed} elements are required")]
    DomainTooSmall { needed: usize, given: usize },
    #[error("formula is not well formed: {}", .0.findings.iter().map(|f| f.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(ValidationReport),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("malformed interpretation: {0}")]
    Json(String),
}

impl ModelError {
    pub fn is_budget(&self) -> bool {
        matches!(self, ModelError::BudgetExceeded { .. })
    }
}
