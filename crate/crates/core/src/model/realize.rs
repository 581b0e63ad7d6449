//! Building an interpretation that satisfies a formula set.

use std::collections::BTreeSet;

use super::budget::QuantifierBudget;
use super::entail::{default_domain_size, symbolic_domain, Problem};
use super::error::ModelError;
use super::eval::{evaluate, evaluate_term};
use super::interpretation::Interpretation;
use crate::logic::{Signature, Wff};

fn collect_facts<'w>(f: &'w Wff, out: &mut Vec<&'w Wff>) {
    match f {
        Wff::Atom(..) => out.push(f),
        Wff::And(a, b) => {
            collect_facts(a, out);
            collect_facts(b, out);
        }
        _ => {}
    }
}

fn base_model(sig: &Signature, size: usize, designated: bool) -> Result<Interpretation, ModelError> {
    let domain = symbolic_domain(sig, size, designated)?;
    let mut interp = Interpretation::new(sig.clone(), domain.names.iter().cloned())?;
    for (c, &e) in &domain.constants {
        interp.set_constant_index(c, e);
    }
    for (f, _) in sig.functions() {
        interp.set_function_with(f, |_| 0)?;
    }
    if let Some((top, bottom)) = domain.designated {
        interp.designate_index(top, bottom);
    }
    Ok(interp)
}

fn all_hold(formulas: &[Wff], interp: &Interpretation, budget: &QuantifierBudget) -> Result<bool, ModelError> {
    for f in formulas {
        if !evaluate(f, interp, budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn canonical_at(
    formulas: &[Wff],
    sig: &Signature,
    size: usize,
    designated: bool,
    budget: &QuantifierBudget,
) -> Result<Option<Interpretation>, ModelError> {
    let mut interp = base_model(sig, size, designated)?;
    let mut facts = Vec::new();
    for f in formulas {
        collect_facts(f, &mut facts);
    }
    for fact in facts {
        let Wff::Atom(p, args) = fact else { unreachable!() };
        if !args.iter().all(|t| t.is_closed()) {
            continue;
        }
        let tuple = args
            .iter()
            .map(|t| evaluate_term(t, &interp, budget))
            .collect::<Result<Vec<_>, _>>()?;
        interp.add_tuple_index(p, &tuple);
    }
    Ok(all_hold(formulas, &interp, budget)?.then_some(interp))
}

/// The smallest structure making every asserted ground fact true and nothing else: one
/// element per constant, functions constant at the first element, relations holding exactly
/// on the atoms that occur as top-level conjuncts. Returns it if it satisfies every formula.
pub fn canonical_model(
    formulas: &[Wff],
    sig: &Signature,
    budget: &QuantifierBudget,
) -> Result<Option<Interpretation>, ModelError> {
    let size = default_domain_size(sig, formulas);
    let designated = formulas.iter().any(Wff::has_predicate_term);
    canonical_at(formulas, sig, size, designated, budget)
}

/// Groups of formula indices connected through shared function or predicate symbols.
fn components(formulas: &[Wff]) -> Vec<Vec<usize>> {
    let symbols: Vec<BTreeSet<String>> = formulas.iter().map(Wff::free_symbols).collect();
    let mut seen = vec![false; formulas.len()];
    let mut out = Vec::new();
    for start in 0..formulas.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut group = vec![start];
        let mut reached = symbols[start].clone();
        loop {
            let mut grew = false;
            for i in 0..formulas.len() {
                if !seen[i] && !symbols[i].is_disjoint(&reached) {
                    seen[i] = true;
                    group.push(i);
                    reached.extend(symbols[i].iter().cloned());
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        group.sort_unstable();
        out.push(group);
    }
    out
}

/// A satisfying interpretation at the default domain size, or `None` when there is none.
///
/// Tries the canonical model first. Otherwise the formulas are split into groups sharing no
/// function or predicate symbol; each group gets the canonical model or a searched one over
/// the same domain, and the tables are merged.
pub fn realize(
    formulas: &[Wff],
    sig: &Signature,
    budget: &QuantifierBudget,
) -> Result<Option<Interpretation>, ModelError> {
    let size = default_domain_size(sig, formulas);
    let designated = formulas.iter().any(Wff::has_predicate_term);
    if let Some(m) = canonical_at(formulas, sig, size, designated, budget)? {
        return Ok(Some(m));
    }
    let mut merged = base_model(sig, size, designated)?;
    for group in components(formulas) {
        let part: Vec<Wff> = group.iter().map(|&i| formulas[i].clone()).collect();
        let model = match canonical_at(&part, sig, size, designated, budget)? {
            Some(m) => m,
            None => {
                let p = Problem::with_designated(&part, sig, size, designated, budget)?;
                let all: Vec<usize> = (0..p.len()).collect();
                match p.solve(&all)? {
                    Some(m) => m,
                    None => return Ok(None),
                }
            }
        };
        let used: BTreeSet<String> = part.iter().flat_map(Wff::free_symbols).collect();
        for name in &used {
            if let Ok(r) = model.relation(name) {
                merged.set_relation(name, r.clone());
            } else if let Ok(t) = model.function(name) {
                merged.set_function_table(name, t.clone());
            }
        }
    }
    debug_assert!(all_hold(formulas, &merged, budget)?);
    Ok(Some(merged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sig() -> Signature {
        Signature::from_json_str(
            r#"{"constants":["a","b"],"predicates":{"A":0,"B":0,"P":1,"R":2}}"#,
        )
        .unwrap()
    }

    fn wffs(texts: &[&str]) -> Vec<Wff> {
        texts.iter().map(|t| parse_formula(t, &sig()).unwrap()).collect()
    }

    #[test]
    fn facts_become_tuples() {
        let fs = wffs(&["P(a) & R(a, b)", "~P(b)", "forall x. P(x) -> exists y. R(x, y)"]);
        let m = canonical_model(&fs, &sig(), &QuantifierBudget::default()).unwrap().unwrap();
        assert!(m.holds("P", &[0]).unwrap());
        assert!(!m.holds("P", &[1]).unwrap());
        assert!(m.holds("R", &[0, 1]).unwrap());
    }

    #[test]
    fn disjunctions_fall_back_to_search() {
        let fs = wffs(&["A | B", "~A"]);
        let budget = QuantifierBudget::default();
        assert!(canonical_model(&fs, &sig(), &budget).unwrap().is_none());
        let m = realize(&fs, &sig(), &budget).unwrap().unwrap();
        assert!(m.holds("B", &[]).unwrap());
    }

    #[test]
    fn independent_groups_are_solved_apart() {
        let fs = wffs(&["A | B", "~A", "forall x. exists y. R(x, y)", "P(a) | P(b)"]);
        let m = realize(&fs, &sig(), &QuantifierBudget::default()).unwrap().unwrap();
        for f in &fs {
            assert!(evaluate(f, &m, &QuantifierBudget::default()).unwrap());
        }
        assert_eq!(components(&fs), vec![vec![0, 1], vec![2], vec![3]]);
    }

    #[test]
    fn contradictions_have_no_realization() {
        let fs = wffs(&["A", "~A"]);
        assert!(realize(&fs, &sig(), &QuantifierBudget::default()).unwrap().is_none());
    }
}
