use thiserror::Error;

use crate::logic::SignatureError;
use crate::model::ModelError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InfoError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("formula {index} of `{state}` does not parse: {message}")]
    Parse {
        state: String,
        index: usize,
        message: String,
    },
    #[error("`{formula}` is false under the realization of `{state}`")]
    Unsatisfied { state: String, formula: String },
    #[error("no interpretation satisfies the formulas of `{0}`")]
    Inconsistent(String),
    #[error("`{formula}` is not a formula of `{state}`")]
    UnknownFormula { state: String, formula: String },
    #[error("mapping assigns `{0}` more than one image")]
    MultiValued(String),
    #[error("mapping is not total; no image for: {}", .0.join(", "))]
    NotTotal(Vec<String>),
    #[error("mapping is not surjective; nothing maps to: {}", .0.join(", "))]
    NotSurjective(Vec<String>),
    #[error("loss formula `{0}` is not in the state")]
    LossNotSubset(String),
    #[error("superposed formula `{0}` is already in the state")]
    SuperposedOverlaps(String),
    #[error("noisy state is inconsistent")]
    ResultInconsistent,
    #[error("sextuples differ in their {0}")]
    ComponentMismatch(&'static str),
    #[error("ontological states do not share one signature: {0}")]
    SignatureMismatch(String),
    #[error("sextuple component `{0}` is empty")]
    EmptyComponent(&'static str),
    #[error("malformed sextuple: {0}")]
    Json(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Rule(#[from] crate::learn::LearnError),
}

impl InfoError {
    pub fn is_budget(&self) -> bool {
        matches!(self, InfoError::Model(m) if m.is_budget())
    }
}
