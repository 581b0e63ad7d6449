//! Finite interpretations, grounding, evaluation, entailment and consistency.

mod budget;
mod entail;
mod error;
mod eval;
mod ground;
mod interpretation;
mod realize;
mod sat;

pub use budget::{table_count, QuantifierBudget};
pub use entail::{
    check_consistency, default_domain_size, entails, entails_relevant, find_model,
    relevant_premises, ConsistencyVerdict,
};
pub use error::ModelError;
pub use eval::{evaluate, evaluate_term, evaluate_with};
pub use ground::{ground, Ground, GroundAtom, GroundFormula};
pub use interpretation::{FunctionTable, Interpretation, Relation};
pub use realize::{canonical_model, realize};
