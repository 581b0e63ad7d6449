//! Learning by taking the union of two formula sets, and answering queries by entailment.

use super::{LearnError, LearnRule, ProcessRule};
use crate::logic::{Signature, Term, Wff};
use crate::model::{default_domain_size, entails_relevant, realize, QuantifierBudget};

fn union(x: &[Wff], y: &[Wff]) -> Vec<Wff> {
    let mut out: Vec<Wff> = x.to_vec();
    for f in y {
        let k = f.desugar();
        if !out.iter().any(|g| g.desugar() == k) {
            out.push(f.clone());
        }
    }
    out
}

/// Learnable when the union is satisfiable; learning returns the union.
#[derive(Debug, Clone, Copy, Default)]
pub struct FactUnion;

impl LearnRule for FactUnion {
    fn name(&self) -> &str {
        "fact_union"
    }

    fn learnable(&self, x: &[Wff], y: &[Wff], budget: &QuantifierBudget) -> Result<bool, LearnError> {
        let all = union(x, y);
        let Ok(sig) = Signature::infer(&all) else {
            return Ok(false);
        };
        Ok(realize(&all, &sig, budget)?.is_some())
    }

    fn learn(&self, x: &[Wff], y: &[Wff], _budget: &QuantifierBudget) -> Result<Vec<Wff>, LearnError> {
        Ok(union(x, y))
    }
}

/// The answer recorded for the `k`-th query when neither it nor its negation follows.
pub fn unknown_formula(k: usize) -> Wff {
    Wff::atom("Unknown", vec![Term::cst(format!("ask{k}"))])
}

/// Answers each closed query with itself when entailed, its negation when that is entailed,
/// and [`unknown_formula`] otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct FactQuery;

impl ProcessRule for FactQuery {
    fn name(&self) -> &str {
        "fact_query"
    }

    fn processable(&self, _u: &[Wff], q: &[Wff], _budget: &QuantifierBudget) -> Result<bool, LearnError> {
        Ok(!q.is_empty() && q.iter().all(Wff::is_closed))
    }

    fn process(&self, u: &[Wff], q: &[Wff], budget: &QuantifierBudget) -> Result<Vec<Wff>, LearnError> {
        let mut all = u.to_vec();
        all.extend(q.iter().cloned());
        let sig = Signature::infer(&all).map_err(|e| LearnError::BadState(e.to_string()))?;
        let size = default_domain_size(&sig, &all);
        let mut out = Vec::new();
        for (k, query) in q.iter().enumerate() {
            let negated = Wff::not(query.clone());
            if entails_relevant(u, query, &sig, size, budget)? {
                out.push(query.clone());
            } else if entails_relevant(u, &negated, &sig, size, budget)? {
                out.push(negated);
            } else {
                out.push(unknown_formula(k));
            }
        }
        Ok(out)
    }
}
