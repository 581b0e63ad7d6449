use std::collections::BTreeSet;
use std::fmt;

use super::error::InfoError;
use crate::logic::{format_formula, Signature, Wff};
use crate::model::{evaluate, realize, Interpretation, QuantifierBudget};

/// A finite set of formulas describing objects over times, together with an interpretation
/// in which all of them hold.
///
/// Formulas are kept in insertion order without duplicates; two formulas are the same member
/// when they agree after desugaring.
#[derive(Debug, Clone)]
pub struct StateSet {
    label: String,
    objects: Vec<String>,
    times: Vec<String>,
    formulas: Vec<Wff>,
    keys: Vec<Wff>,
    realization: Interpretation,
}

fn dedup(formulas: Vec<Wff>) -> (Vec<Wff>, Vec<Wff>) {
    let mut seen = BTreeSet::new();
    let mut kept = Vec::new();
    let mut keys = Vec::new();
    for f in formulas {
        let k = f.desugar();
        if seen.insert(k.clone()) {
            kept.push(f);
            keys.push(k);
        }
    }
    (kept, keys)
}

impl StateSet {
    /// Checks that every formula holds under `realization`.
    pub fn new(
        label: impl Into<String>,
        objects: Vec<String>,
        times: Vec<String>,
        formulas: Vec<Wff>,
        realization: Interpretation,
        budget: &QuantifierBudget,
    ) -> Result<Self, InfoError> {
        let label = label.into();
        let (formulas, keys) = dedup(formulas);
        for f in &formulas {
            if !evaluate(f, &realization, budget)? {
                return Err(InfoError::Unsatisfied {
                    state: label,
                    formula: format_formula(f),
                });
            }
        }
        Ok(StateSet { label, objects, times, formulas, keys, realization })
    }

    /// Finds a realization over `signature` (see [`realize`]).
    pub fn realize(
        label: impl Into<String>,
        objects: Vec<String>,
        times: Vec<String>,
        formulas: Vec<Wff>,
        signature: &Signature,
        budget: &QuantifierBudget,
    ) -> Result<Self, InfoError> {
        let label = label.into();
        let (formulas, keys) = dedup(formulas);
        let realization =
            realize(&formulas, signature, budget)?.ok_or_else(|| InfoError::Inconsistent(label.clone()))?;
        Ok(StateSet { label, objects, times, formulas, keys, realization })
    }

    /// The same objects and times with a different formula list. The current realization is
    /// kept when it still satisfies everything; otherwise a new one is found over the
    /// current signature extended by whatever the new formulas use.
    pub fn with_formulas(&self, formulas: Vec<Wff>, budget: &QuantifierBudget) -> Result<Self, InfoError> {
        let sig = self.signature().merge(&Signature::infer(&formulas)?)?;
        if &sig == self.signature() {
            if let Ok(s) = StateSet::new(
                self.label.clone(),
                self.objects.clone(),
                self.times.clone(),
                formulas.clone(),
                self.realization.clone(),
                budget,
            ) {
                return Ok(s);
            }
        }
        StateSet::realize(
            self.label.clone(),
            self.objects.clone(),
            self.times.clone(),
            formulas,
            &sig,
            budget,
        )
    }

    pub fn relabeled(&self, label: impl Into<String>) -> Self {
        StateSet { label: label.into(), ..self.clone() }
    }

    pub fn with_times(&self, times: Vec<String>) -> Self {
        StateSet { times, ..self.clone() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn times(&self) -> &[String] {
        &self.times
    }

    pub fn formulas(&self) -> &[Wff] {
        &self.formulas
    }

    pub fn len(&self) -> usize {
        self.formulas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.formulas.is_empty()
    }

    pub fn realization(&self) -> &Interpretation {
        &self.realization
    }

    pub fn signature(&self) -> &Signature {
        self.realization.signature()
    }

    /// Position of `f` (compared after desugaring).
    pub fn index_of(&self, f: &Wff) -> Option<usize> {
        let k = f.desugar();
        self.keys.iter().position(|x| *x == k)
    }

    pub fn contains(&self, f: &Wff) -> bool {
        self.index_of(f).is_some()
    }

    /// Desugared formulas as a set.
    pub fn key_set(&self) -> BTreeSet<Wff> {
        self.keys.iter().cloned().collect()
    }

    pub fn same_formulas(&self, other: &StateSet) -> bool {
        self.key_set() == other.key_set()
    }

    pub fn formula_texts(&self) -> Vec<String> {
        self.formulas.iter().map(format_formula).collect()
    }
}

impl PartialEq for StateSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_formulas(other)
    }
}

impl fmt::Display for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {{{}}}", self.label, self.formula_texts().join("; "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sig() -> Signature {
        Signature::from_json_str(r#"{"constants":["a"],"predicates":{"A":0,"B":0,"P":1}}"#).unwrap()
    }

    fn wffs(texts: &[&str]) -> Vec<Wff> {
        texts.iter().map(|t| parse_formula(t, &sig()).unwrap()).collect()
    }

    #[test]
    fn sugar_variants_are_one_member() {
        let s = StateSet::realize(
            "S",
            vec![],
            vec![],
            wffs(&["A & B", "~(A -> ~B)", "P(a)"]),
            &sig(),
            &QuantifierBudget::default(),
        )
        .unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.formula_texts(), vec!["A & B", "P(a)"]);
    }

    #[test]
    fn realization_must_satisfy() {
        let budget = QuantifierBudget::default();
        let s = StateSet::realize("S", vec![], vec![], wffs(&["A"]), &sig(), &budget).unwrap();
        let err = StateSet::new("T", vec![], vec![], wffs(&["~A"]), s.realization().clone(), &budget)
            .unwrap_err();
        assert!(matches!(err, InfoError::Unsatisfied { .. }));
    }

    #[test]
    fn contradictions_cannot_be_states() {
        let err = StateSet::realize(
            "S",
            vec![],
            vec![],
            wffs(&["A", "~A"]),
            &sig(),
            &QuantifierBudget::default(),
        )
        .unwrap_err();
        assert_eq!(err, InfoError::Inconsistent("S".into()));
    }
}
