//! Noisy information: loss and superposed states, and the symmetry between a sextuple and
//! its noisy counterpart.

use serde::Serialize;
use serde_json::{json, Value};

use super::error::InfoError;
use super::sextuple::InformationSextuple;
use super::state::StateSet;
use crate::logic::{format_formula, Wff};
use crate::model::QuantifierBudget;

/// Formulas dropped from (`loss`) and added to (`superposed`) an ontological state.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NoiseSpec {
    pub loss: Vec<Wff>,
    pub superposed: Vec<Wff>,
}

impl NoiseSpec {
    pub fn new(loss: Vec<Wff>, superposed: Vec<Wff>) -> Self {
        NoiseSpec { loss, superposed }
    }

    pub fn empty() -> Self {
        NoiseSpec::default()
    }

    /// Swaps loss and superposed; undoes `self` whenever `self` applied cleanly.
    pub fn inverse(&self) -> Self {
        NoiseSpec { loss: self.superposed.clone(), superposed: self.loss.clone() }
    }

    pub fn is_empty(&self) -> bool {
        self.loss.is_empty() && self.superposed.is_empty()
    }

    /// The noise turning `from` into `to`: `loss = from \ to`, `superposed = to \ from`.
    pub fn between(from: &StateSet, to: &StateSet) -> Self {
        let loss = from.formulas().iter().filter(|f| !to.contains(f)).cloned().collect();
        let superposed = to.formulas().iter().filter(|f| !from.contains(f)).cloned().collect();
        NoiseSpec { loss, superposed }
    }

    pub fn to_json_value(&self) -> Value {
        json!({
            "loss": self.loss.iter().map(format_formula).collect::<Vec<_>>(),
            "superposed": self.superposed.iter().map(format_formula).collect::<Vec<_>>(),
        })
    }
}

/// `(s \ loss) ∪ superposed`, realized again and checked for consistency.
pub fn compose_noisy(
    s: &StateSet,
    n: &NoiseSpec,
    budget: &QuantifierBudget,
) -> Result<StateSet, InfoError> {
    if let Some(f) = n.loss.iter().find(|f| !s.contains(f)) {
        return Err(InfoError::LossNotSubset(format_formula(f)));
    }
    if let Some(f) = n.superposed.iter().find(|f| s.contains(f)) {
        return Err(InfoError::SuperposedOverlaps(format_formula(f)));
    }
    let lost: Vec<Wff> = n.loss.iter().map(Wff::desugar).collect();
    let mut formulas: Vec<Wff> = s
        .formulas()
        .iter()
        .filter(|f| !lost.contains(&f.desugar()))
        .cloned()
        .collect();
    formulas.extend(n.superposed.iter().cloned());
    match s.with_formulas(formulas, budget) {
        Err(InfoError::Inconsistent(_)) => Err(InfoError::ResultInconsistent),
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NoiseWitness {
    pub loss: Vec<String>,
    pub superposed: Vec<String>,
}

impl From<&NoiseSpec> for NoiseWitness {
    fn from(n: &NoiseSpec) -> Self {
        NoiseWitness {
            loss: n.loss.iter().map(format_formula).collect(),
            superposed: n.superposed.iter().map(format_formula).collect(),
        }
    }
}

/// Outcome of checking both directions of the noisy relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    /// Noise taking the second ontological state to the first.
    pub forward: Option<NoiseWitness>,
    /// Noise taking the first ontological state to the second.
    pub backward: Option<NoiseWitness>,
    pub symmetric: bool,
}

fn same_components(a: &InformationSextuple, b: &InformationSextuple) -> Result<(), InfoError> {
    if a.ontology() != b.ontology() {
        return Err(InfoError::ComponentMismatch("ontology"));
    }
    if a.occurrence_times() != b.occurrence_times() {
        return Err(InfoError::ComponentMismatch("occurrence times"));
    }
    if a.carrier() != b.carrier() {
        return Err(InfoError::ComponentMismatch("carrier"));
    }
    if a.reflection_times() != b.reflection_times() {
        return Err(InfoError::ComponentMismatch("reflection times"));
    }
    Ok(())
}

/// Applies the witness noise and checks that it lands on `to`.
fn reaches(from: &StateSet, to: &StateSet, budget: &QuantifierBudget) -> Result<Option<NoiseSpec>, InfoError> {
    let n = NoiseSpec::between(from, to);
    match compose_noisy(from, &n, budget) {
        Ok(s) if s.same_formulas(to) => Ok(Some(n)),
        Ok(_) | Err(InfoError::ResultInconsistent) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Whether each sextuple is noisy information of the other.
pub fn check_noisy_symmetry(
    i: &InformationSextuple,
    noisy: &InformationSextuple,
    budget: &QuantifierBudget,
) -> Result<SymmetryReport, InfoError> {
    same_components(i, noisy)?;
    let forward = reaches(noisy.ontological_state(), i.ontological_state(), budget)?;
    let backward = reaches(i.ontological_state(), noisy.ontological_state(), budget)?;
    Ok(SymmetryReport {
        symmetric: forward.is_some() && backward.is_some(),
        forward: forward.as_ref().map(NoiseWitness::from),
        backward: backward.as_ref().map(NoiseWitness::from),
    })
}
