pub mod automaton;
pub mod bound;
pub mod ethics;
pub mod info;
pub mod learn;
pub mod logic;
pub mod model;

pub use logic::{
    format_formula, parse_formula, validate_wff, Binder, BinderKind, ParseError, Signature,
    Term, ValidationReport, Wff,
};
pub use model::{
    check_consistency, entails, evaluate, ground, ConsistencyVerdict, Interpretation,
    ModelError, QuantifierBudget,
};
