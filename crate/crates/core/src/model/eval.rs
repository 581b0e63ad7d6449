//! Direct recursive evaluation of formulas in a finite interpretation.

use std::collections::BTreeMap;

use super::budget::QuantifierBudget;
use super::error::ModelError;
use super::interpretation::{cell_count, FunctionTable, Interpretation, Relation};
use crate::logic::{BinderKind, Term, Wff};

/// What a name is bound to inside a quantifier's scope.
#[derive(Debug, Clone)]
pub(crate) enum Bind {
    Elem(usize),
    Rel(Relation),
    Func(FunctionTable),
}

pub(crate) type Env = Vec<(String, Bind)>;

pub(crate) fn lookup<'e>(env: &'e Env, name: &str) -> Option<&'e Bind> {
    env.iter().rev().find(|(n, _)| n == name).map(|(_, b)| b)
}

/// Calls `visit` with every relation or total function of the binder's arity over a domain
/// of `size` elements, in a fixed order, until `visit` returns `Ok(true)`. Returns whether
/// enumeration stopped early.
pub(crate) fn for_each_table(
    kind: BinderKind,
    name: &str,
    arity: usize,
    size: usize,
    budget: &QuantifierBudget,
    mut visit: impl FnMut(Bind) -> Result<bool, ModelError>,
) -> Result<bool, ModelError> {
    let is_pred = kind == BinderKind::Predicate;
    let count = budget.check_higher_order(name, is_pred, arity, size)?;
    let cells = cell_count(arity, size);
    if is_pred {
        for mask in 0..count {
            let members = (0..cells).map(|i| mask >> i & 1 == 1).collect();
            if visit(Bind::Rel(Relation { arity, members }))? {
                return Ok(true);
            }
        }
    } else {
        let mut values = vec![0usize; cells];
        loop {
            if visit(Bind::Func(FunctionTable { arity, values: values.clone() }))? {
                return Ok(true);
            }
            // odometer step; the last cell varies fastest
            let mut i = cells;
            loop {
                if i == 0 {
                    return Ok(false);
                }
                i -= 1;
                values[i] += 1;
                if values[i] < size {
                    break;
                }
                values[i] = 0;
            }
        }
    }
    Ok(false)
}

pub(crate) fn binder_arity(
    interp_sig: &crate::logic::Signature,
    name: &str,
    kind: BinderKind,
) -> Result<usize, ModelError> {
    let arity = match kind {
        BinderKind::Predicate => interp_sig.predicate_arity(name),
        BinderKind::Function => interp_sig.function_arity(name),
        BinderKind::Individual => Some(0),
    };
    arity.ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))
}

struct Evaluator<'a> {
    interp: &'a Interpretation,
    budget: &'a QuantifierBudget,
}

impl Evaluator<'_> {
    fn term(&self, t: &Term, env: &Env) -> Result<usize, ModelError> {
        let size = self.interp.size();
        match t {
            Term::Var(x) => match lookup(env, x) {
                Some(Bind::Elem(e)) => Ok(*e),
                _ => Err(ModelError::FreeVariable(x.clone())),
            },
            Term::Const(c) => self.interp.constant(c),
            Term::App(f, args) => {
                let vals = self.args(args, env)?;
                match lookup(env, f) {
                    Some(Bind::Func(table)) => Ok(table.apply(&vals, size)),
                    _ => self.interp.apply(f, &vals),
                }
            }
            Term::Pred(p, args) => {
                let holds = self.holds(p, args, env)?;
                let (top, bottom) = self
                    .interp
                    .designated()
                    .ok_or(ModelError::NoDesignatedElements)?;
                Ok(if holds { top } else { bottom })
            }
        }
    }

    fn args(&self, args: &[Term], env: &Env) -> Result<Vec<usize>, ModelError> {
        args.iter().map(|a| self.term(a, env)).collect()
    }

    fn holds(&self, p: &str, args: &[Term], env: &Env) -> Result<bool, ModelError> {
        let vals = self.args(args, env)?;
        match lookup(env, p) {
            Some(Bind::Rel(rel)) => Ok(rel.contains(&vals, self.interp.size())),
            _ => self.interp.holds(p, &vals),
        }
    }

    fn wff(&self, w: &Wff, env: &mut Env) -> Result<bool, ModelError> {
        match w {
            Wff::Atom(p, args) => self.holds(p, args, env),
            Wff::Not(a) => Ok(!self.wff(a, env)?),
            Wff::Implies(a, b) => Ok(!self.wff(a, env)? || self.wff(b, env)?),
            Wff::And(a, b) => Ok(self.wff(a, env)? && self.wff(b, env)?),
            Wff::Or(a, b) => Ok(self.wff(a, env)? || self.wff(b, env)?),
            Wff::Iff(a, b) => Ok(self.wff(a, env)? == self.wff(b, env)?),
            Wff::ForAll(x, body) => Ok(!self.search(x, body, env, false)?),
            Wff::Exists(x, body) => self.search(x, body, env, true),
        }
    }

    /// True iff some binding of `x` makes `body` evaluate to `want`.
    fn search(
        &self,
        x: &crate::logic::Binder,
        body: &Wff,
        env: &mut Env,
        want: bool,
    ) -> Result<bool, ModelError> {
        let size = self.interp.size();
        if x.kind == BinderKind::Individual {
            for e in 0..size {
                env.push((x.name.clone(), Bind::Elem(e)));
                let v = self.wff(body, env);
                env.pop();
                if v? == want {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        let arity = binder_arity(self.interp.signature(), &x.name, x.kind)?;
        for_each_table(x.kind, &x.name, arity, size, self.budget, |bind| {
            env.push((x.name.clone(), bind));
            let v = self.wff(body, env);
            env.pop();
            Ok(v? == want)
        })
    }
}

/// Truth value of a closed formula.
pub fn evaluate(
    f: &Wff,
    interp: &Interpretation,
    budget: &QuantifierBudget,
) -> Result<bool, ModelError> {
    evaluate_with(f, interp, budget, &BTreeMap::new())
}

/// Truth value of a formula whose free variables are given by `assignment` (variable name to
/// domain element name).
pub fn evaluate_with(
    f: &Wff,
    interp: &Interpretation,
    budget: &QuantifierBudget,
    assignment: &BTreeMap<String, String>,
) -> Result<bool, ModelError> {
    let mut env: Env = assignment
        .iter()
        .map(|(x, d)| Ok((x.clone(), Bind::Elem(interp.element(d)?))))
        .collect::<Result<_, ModelError>>()?;
    Evaluator { interp, budget }.wff(f, &mut env)
}

/// Evaluates a closed term to a domain element index.
pub fn evaluate_term(
    t: &Term,
    interp: &Interpretation,
    budget: &QuantifierBudget,
) -> Result<usize, ModelError> {
    Evaluator { interp, budget }.term(t, &Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse_formula, Signature};

    fn setup() -> (Signature, Interpretation) {
        let sig = Signature::from_json_str(
            r#"{"constants":["X","T1","c60"],"functions":{"ftemp":2},
                "predicates":{"Active":2,"Gt":2,"P":1,"A1":1,"Q":0}}"#,
        )
        .unwrap();
        let text = r#"{"domain":["alice","t1","sixty","seventy"],
            "constants":{"X":"alice","T1":"t1","c60":"sixty"},
            "functions":{"ftemp":{}},
            "relations":{"Active":[["alice","t1"]],"Gt":[["seventy","sixty"]],"P":[["alice"],["t1"]]},
            "designated_true":"t1","designated_false":"alice"}"#;
        // fill ftemp with a constant table
        let mut v: serde_json::Value = serde_json::from_str(text).unwrap();
        let mut table = serde_json::Map::new();
        for a in ["alice", "t1", "sixty", "seventy"] {
            for b in ["alice", "t1", "sixty", "seventy"] {
                table.insert(format!("{a},{b}"), "seventy".into());
            }
        }
        v["functions"]["ftemp"] = serde_json::Value::Object(table);
        let interp = Interpretation::from_json_value(&v, &sig).unwrap();
        (sig, interp)
    }

    fn eval(text: &str) -> bool {
        let (sig, interp) = setup();
        let f = parse_formula(text, &sig).unwrap();
        evaluate(&f, &interp, &QuantifierBudget::default()).unwrap()
    }

    #[test]
    fn atoms_follow_relation_tables() {
        assert!(eval("Active(X, T1)"));
        assert!(!eval("Active(T1, X)"));
        assert!(eval("Active(X, T1) & Gt(ftemp(X, T1), c60)"));
    }

    #[test]
    fn negation_flips() {
        assert!(!eval("~Active(X, T1)"));
        assert!(eval("~~Active(X, T1)"));
    }

    #[test]
    fn quantifiers_range_over_domain() {
        assert!(eval("exists x. P(x)"));
        assert!(!eval("forall x. P(x)"));
        assert!(eval("forall x. P(x) -> exists y. P(y)"));
    }

    #[test]
    fn higher_order_quantifier_enumerates_relations() {
        // some unary relation holds of everything; not every relation does
        assert!(eval("exists A1. forall x. A1(x)"));
        assert!(!eval("forall A1. exists x. A1(x)"));
    }

    #[test]
    fn predicate_terms_use_designated_elements() {
        // Active(X, T1) holds, so as a term it denotes t1, and P(t1) holds
        let (sig, interp) = setup();
        let t = crate::logic::Term::pred("Active", vec![Term::cst("X"), Term::cst("T1")]);
        assert_eq!(evaluate_term(&t, &interp, &QuantifierBudget::default()).unwrap(), 1);
        let f = Wff::atom("P", vec![t]);
        assert!(crate::logic::validate_wff(&f, &sig).is_empty());
        assert!(evaluate(&f, &interp, &QuantifierBudget::default()).unwrap());
    }

    #[test]
    fn free_variable_needs_assignment() {
        let (sig, interp) = setup();
        let f = parse_formula("P(x)", &sig).unwrap();
        let budget = QuantifierBudget::default();
        assert_eq!(
            evaluate(&f, &interp, &budget).unwrap_err(),
            ModelError::FreeVariable("x".into())
        );
        let a = BTreeMap::from([("x".to_string(), "alice".to_string())]);
        assert!(evaluate_with(&f, &interp, &budget, &a).unwrap());
    }
}
