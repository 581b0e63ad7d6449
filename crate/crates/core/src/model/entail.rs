//! Entailment and consistency over a fixed finite domain, decided by grounding to
//! propositional atoms and searching for a satisfying assignment.
//!
//! Constants are interpreted under unique names: each constant is its own domain element,
//! and the remaining elements are anonymous. Function tables and relations are free.

use std::collections::{BTreeMap, BTreeSet};

use super::budget::QuantifierBudget;
use super::error::ModelError;
use super::ground::{atom_text, Ground, GroundAtom, Grounder, SymbolicDomain};
use super::interpretation::{cell_count, tuple_index, FunctionTable, Interpretation};
use super::sat::{solve, Encoder};
use crate::logic::{validate_wff, Signature, Wff};

/// Outcome of a consistency check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    Consistent { model: Box<Interpretation> },
    /// Indices into the checked list of a subset that is unsatisfiable and becomes
    /// satisfiable when any one member is removed.
    Inconsistent { core: Vec<usize> },
}

impl ConsistencyVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ConsistencyVerdict::Consistent { .. })
    }
}

/// Smallest domain that gives every constant its own element (plus the two designated
/// elements when predicate terms occur).
pub fn default_domain_size(sig: &Signature, formulas: &[Wff]) -> usize {
    let extra = if formulas.iter().any(Wff::has_predicate_term) { 2 } else { 0 };
    (sig.constant_count() + extra).max(1)
}

fn fresh_element(taken: &BTreeSet<String>, base: &str) -> String {
    if !taken.contains(base) {
        return base.to_string();
    }
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded search")
}

pub(crate) fn symbolic_domain(
    sig: &Signature,
    domain_size: usize,
    designated: bool,
) -> Result<SymbolicDomain, ModelError> {
    let mut names: Vec<String> = sig.constants().map(str::to_string).collect();
    let needed = (names.len() + if designated { 2 } else { 0 }).max(1);
    if domain_size < needed {
        return Err(ModelError::DomainTooSmall { needed, given: domain_size });
    }
    let constants = names.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let mut taken: BTreeSet<String> = names.iter().cloned().collect();
    let mut pair = None;
    if designated {
        let top = fresh_element(&taken, "_top");
        taken.insert(top.clone());
        let bottom = fresh_element(&taken, "_bot");
        taken.insert(bottom.clone());
        pair = Some((names.len(), names.len() + 1));
        names.push(top);
        names.push(bottom);
    }
    let mut k = 0;
    while names.len() < domain_size {
        let name = format!("_e{k}");
        k += 1;
        if taken.insert(name.clone()) {
            names.push(name);
        }
    }
    Ok(SymbolicDomain {
        signature: sig.clone(),
        names,
        constants,
        designated: pair,
    })
}

/// A list of formulas grounded once over a symbolic domain, ready for repeated
/// satisfiability queries on subsets.
pub(crate) struct Problem {
    domain: SymbolicDomain,
    grounded: Vec<Ground>,
    budget: QuantifierBudget,
}

impl Problem {
    pub fn new(
        formulas: &[Wff],
        sig: &Signature,
        domain_size: usize,
        budget: &QuantifierBudget,
    ) -> Result<Self, ModelError> {
        let designated = formulas.iter().any(Wff::has_predicate_term);
        Problem::with_designated(formulas, sig, domain_size, designated, budget)
    }

    /// As [`Problem::new`], but reserving the designated pair whenever `designated` is set.
    pub fn with_designated(
        formulas: &[Wff],
        sig: &Signature,
        domain_size: usize,
        designated: bool,
        budget: &QuantifierBudget,
    ) -> Result<Self, ModelError> {
        for f in formulas {
            let report = validate_wff(f, sig);
            if !report.is_empty() {
                return Err(ModelError::Invalid(report));
            }
        }
        let designated = designated || formulas.iter().any(Wff::has_predicate_term);
        let domain = symbolic_domain(sig, domain_size, designated)?;
        let grounder = Grounder { structure: &domain, budget };
        let grounded = formulas
            .iter()
            .map(|f| grounder.wff(f, &mut Vec::new()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Problem { domain, grounded, budget: *budget })
    }

    pub fn len(&self) -> usize {
        self.grounded.len()
    }

    /// A model of the formulas at `subset`, or `None` when they are jointly unsatisfiable.
    pub fn solve(&self, subset: &[usize]) -> Result<Option<Interpretation>, ModelError> {
        let mut atoms = BTreeSet::new();
        for &i in subset {
            atoms.extend(self.grounded[i].atoms());
        }
        let holds = atoms
            .iter()
            .filter(|a| matches!(a, GroundAtom::Holds { .. }))
            .count();
        self.budget.check_atoms(holds)?;
        // every value of a partially mentioned function cell takes part in exactly-one
        let size = self.domain.names.len();
        let mut cells = BTreeSet::new();
        for a in &atoms {
            if let GroundAtom::Value { function, args, .. } = a {
                cells.insert((function.clone(), args.clone()));
            }
        }
        for (function, args) in &cells {
            for value in 0..size {
                atoms.insert(GroundAtom::Value {
                    function: function.clone(),
                    args: args.clone(),
                    value,
                });
            }
        }
        let mut ordered: Vec<(String, GroundAtom)> = atoms
            .into_iter()
            .map(|a| (atom_text(&a, &self.domain.names), a))
            .collect();
        ordered.sort();
        let mut enc = Encoder::new(ordered.into_iter().map(|(_, a)| a).collect());
        for (function, args) in &cells {
            let lits: Vec<i32> = (0..size)
                .map(|value| {
                    enc.atoms[&GroundAtom::Value {
                        function: function.clone(),
                        args: args.clone(),
                        value,
                    }]
                })
                .collect();
            enc.exactly_one(&lits);
        }
        for &i in subset {
            enc.assert(&self.grounded[i]);
        }
        let Some(values) = solve(&enc.cnf) else {
            return Ok(None);
        };
        let truth: BTreeMap<&GroundAtom, bool> = enc
            .atoms
            .iter()
            .map(|(a, &v)| (a, values[v as usize]))
            .collect();
        Ok(Some(self.to_interpretation(&truth)?))
    }

    fn to_interpretation(
        &self,
        truth: &BTreeMap<&GroundAtom, bool>,
    ) -> Result<Interpretation, ModelError> {
        let d = &self.domain;
        let size = d.names.len();
        let mut interp = Interpretation::new(d.signature.clone(), d.names.iter().cloned())?;
        for (c, &e) in &d.constants {
            interp.set_constant_index(c, e);
        }
        let mut tables: BTreeMap<String, FunctionTable> = d
            .signature
            .functions()
            .map(|(f, arity)| {
                let values = vec![0; cell_count(arity, size)];
                (f.to_string(), FunctionTable { arity, values })
            })
            .collect();
        for (atom, &value) in truth {
            match atom {
                GroundAtom::Holds { predicate, args } if value => {
                    interp.add_tuple_index(predicate, args);
                }
                GroundAtom::Value { function, args, value: v } if value => {
                    if let Some(t) = tables.get_mut(function) {
                        t.values[tuple_index(args, size)] = *v;
                    }
                }
                _ => {}
            }
        }
        for (f, t) in tables {
            interp.set_function_table(&f, t);
        }
        if let Some((top, bottom)) = d.designated {
            interp.designate_index(top, bottom);
        }
        Ok(interp)
    }
}

/// Whether every interpretation of `sig` over `domain_size` elements that satisfies all
/// `premises` also satisfies `goal`.
pub fn entails(
    premises: &[Wff],
    goal: &Wff,
    sig: &Signature,
    domain_size: usize,
    budget: &QuantifierBudget,
) -> Result<bool, ModelError> {
    let mut all = premises.to_vec();
    all.push(Wff::not(goal.clone()));
    let p = Problem::new(&all, sig, domain_size, budget)?;
    let subset: Vec<usize> = (0..p.len()).collect();
    Ok(p.solve(&subset)?.is_none())
}

/// Some interpretation satisfying every formula, if one exists at this domain size.
pub fn find_model(
    formulas: &[Wff],
    sig: &Signature,
    domain_size: usize,
    budget: &QuantifierBudget,
) -> Result<Option<Interpretation>, ModelError> {
    let p = Problem::new(formulas, sig, domain_size, budget)?;
    let subset: Vec<usize> = (0..p.len()).collect();
    p.solve(&subset)
}

/// Satisfiability of the whole set; an unsatisfiable set comes with a core that is minimal
/// under deletion of single members, trying members in list order.
pub fn check_consistency(
    formulas: &[Wff],
    sig: &Signature,
    domain_size: usize,
    budget: &QuantifierBudget,
) -> Result<ConsistencyVerdict, ModelError> {
    let p = Problem::new(formulas, sig, domain_size, budget)?;
    let mut core: Vec<usize> = (0..p.len()).collect();
    if let Some(model) = p.solve(&core)? {
        return Ok(ConsistencyVerdict::Consistent { model: Box::new(model) });
    }
    let mut i = 0;
    while i < core.len() {
        let mut without = core.clone();
        without.remove(i);
        if p.solve(&without)?.is_none() {
            core = without;
        } else {
            i += 1;
        }
    }
    Ok(ConsistencyVerdict::Inconsistent { core })
}

/// Indices of the premises connected to `goal` through shared function or predicate
/// symbols. For a satisfiable premise set over a fixed domain, the remaining premises
/// cannot change whether `goal` is entailed.
pub fn relevant_premises(premises: &[Wff], goal: &Wff) -> Vec<usize> {
    let symbols: Vec<BTreeSet<String>> = premises.iter().map(Wff::free_symbols).collect();
    let mut reached = goal.free_symbols();
    let mut chosen = vec![false; premises.len()];
    loop {
        let mut grew = false;
        for (i, s) in symbols.iter().enumerate() {
            if !chosen[i] && !s.is_disjoint(&reached) {
                chosen[i] = true;
                reached.extend(s.iter().cloned());
                grew = true;
            }
        }
        if !grew {
            break;
        }
    }
    (0..premises.len()).filter(|&i| chosen[i]).collect()
}

/// [`entails`] restricted to the premises relevant to `goal`. Only sound when the full
/// premise set is known to be satisfiable at this domain size.
pub fn entails_relevant(
    premises: &[Wff],
    goal: &Wff,
    sig: &Signature,
    domain_size: usize,
    budget: &QuantifierBudget,
) -> Result<bool, ModelError> {
    let chosen: Vec<Wff> = relevant_premises(premises, goal)
        .into_iter()
        .map(|i| premises[i].clone())
        .collect();
    entails(&chosen, goal, sig, domain_size, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sig() -> Signature {
        Signature::from_json_str(
            r#"{"constants":["a","b"],"functions":{"f":1},
                "predicates":{"A":0,"B":0,"C":0,"P":1,"R":2}}"#,
        )
        .unwrap()
    }

    fn wffs(texts: &[&str]) -> Vec<Wff> {
        texts.iter().map(|t| parse_formula(t, &sig()).unwrap()).collect()
    }

    fn ent(premises: &[&str], goal: &str) -> bool {
        let s = sig();
        let goal = parse_formula(goal, &s).unwrap();
        let n = default_domain_size(&s, &[]);
        entails(&wffs(premises), &goal, &s, n, &QuantifierBudget::default()).unwrap()
    }

    #[test]
    fn modus_ponens() {
        assert!(ent(&["A", "A -> B"], "B"));
        assert!(!ent(&["A"], "B"));
    }

    #[test]
    fn quantifiers_ground_over_the_constants() {
        assert!(ent(&["forall x. P(x)"], "P(a) & P(b)"));
        assert!(ent(&["P(a)", "P(b)"], "forall x. P(x)"));
        assert!(!ent(&["P(a)"], "forall x. P(x)"));
        assert!(ent(&["forall x. exists y. R(x, y)", "~R(a, a)"], "R(a, b)"));
    }

    #[test]
    fn unique_names_keep_constants_apart() {
        assert!(!ent(&["P(a)"], "P(b)"));
    }

    #[test]
    fn function_values_are_searched() {
        // f(a) is a or b; both must be covered
        assert!(ent(&["P(a)", "P(b)"], "P(f(a))"));
        assert!(!ent(&["P(a)"], "P(f(a))"));
        assert!(ent(&["forall x. P(f(x))"], "exists y. P(y)"));
    }

    #[test]
    fn inconsistent_core_is_minimal() {
        let s = sig();
        let fs = wffs(&["C", "A", "A -> B", "P(a)", "~B"]);
        let v = check_consistency(&fs, &s, 2, &QuantifierBudget::default()).unwrap();
        assert_eq!(v, ConsistencyVerdict::Inconsistent { core: vec![1, 2, 4] });
    }

    #[test]
    fn consistent_model_satisfies_all() {
        let s = sig();
        let fs = wffs(&["A", "A -> B", "exists x. P(x) & ~P(f(x))"]);
        let ConsistencyVerdict::Consistent { model } =
            check_consistency(&fs, &s, 2, &QuantifierBudget::default()).unwrap()
        else {
            panic!("expected a model");
        };
        for f in &fs {
            assert!(super::super::eval::evaluate(f, &model, &QuantifierBudget::default()).unwrap());
        }
    }

    #[test]
    fn atom_budget_is_enforced() {
        let s = sig();
        let goal = parse_formula("forall x. forall y. R(x, y)", &s).unwrap();
        let err = entails(&[], &goal, &s, 5, &QuantifierBudget::default().with_ground_atoms(20))
            .unwrap_err();
        assert!(matches!(err, ModelError::BudgetExceeded { count: 25, .. }), "{err}");
    }

    #[test]
    fn domain_must_fit_the_constants() {
        let s = sig();
        let err = entails(&[], &Wff::prop("A"), &s, 1, &QuantifierBudget::default()).unwrap_err();
        assert_eq!(err, ModelError::DomainTooSmall { needed: 2, given: 1 });
    }

    #[test]
    fn relevance_follows_shared_symbols() {
        let fs = wffs(&["A -> B", "C", "B -> P(a)", "R(a, b)"]);
        let goal = parse_formula("P(b)", &sig()).unwrap();
        assert_eq!(relevant_premises(&fs, &goal), vec![0, 2]);
    }
}
