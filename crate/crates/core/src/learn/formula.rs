//! The learning-rule formula a state carries, and recognizing it again after learning.

use crate::logic::{Binder, Term, Wff};

/// Turns a state label into a constant name.
pub fn state_constant(label: &str) -> String {
    let mut s: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if s.is_empty() {
        s.push('S');
    }
    if s == "forall" || s == "exists" {
        s.push('_');
    }
    s
}

pub fn learnable_predicate(rule: &str) -> String {
    format!("Learnable_{rule}")
}

pub fn learn_function(rule: &str) -> String {
    format!("f_learn_{rule}")
}

/// For all `Φx ⊆ learner`, `Φy ⊆ teacher` with `Learnable(Φx, Φy)` there is a formula of
/// `target` equal to `f_learn(Φx, Φy)`. Arguments are constant names.
pub fn rule_formula(rule: &str, learner: &str, teacher: &str, target: &str) -> Wff {
    let x = Term::var("Phi_x");
    let y = Term::var("Phi_y");
    let z = Term::var("phi_z");
    let antecedent = Wff::and(
        Wff::and(
            Wff::atom("IsSubsetOf", vec![x.clone(), Term::cst(learner)]),
            Wff::atom("IsSubsetOf", vec![y.clone(), Term::cst(teacher)]),
        ),
        Wff::atom(learnable_predicate(rule), vec![x.clone(), y.clone()]),
    );
    let consequent = Wff::exists(
        Binder::var("phi_z"),
        Wff::and(
            Wff::atom("IsFormulaOf", vec![z.clone(), Term::cst(target)]),
            Wff::atom("Eq", vec![z, Term::app(learn_function(rule), vec![x, y])]),
        ),
    );
    Wff::forall(
        Binder::var("Phi_x"),
        Wff::forall(Binder::var("Phi_y"), Wff::implies(antecedent, consequent)),
    )
}

/// The state constants of a rule formula for `rule`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleInstance {
    pub learner: String,
    pub teacher: String,
    pub target: String,
}

const HOLES: [&str; 3] = ["?learner", "?teacher", "?target"];

fn match_term(t: &Term, f: &Term, binds: &mut [Option<String>; 3]) -> bool {
    match (t, f) {
        (Term::Const(h), Term::Const(c)) => match HOLES.iter().position(|x| x == h) {
            Some(k) => match &binds[k] {
                Some(b) => b == c,
                None => {
                    binds[k] = Some(c.clone());
                    true
                }
            },
            None => h == c,
        },
        (Term::App(a, xs), Term::App(b, ys)) | (Term::Pred(a, xs), Term::Pred(b, ys)) => {
            a == b && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, binds))
        }
        _ => t == f,
    }
}

fn match_wff(t: &Wff, f: &Wff, binds: &mut [Option<String>; 3]) -> bool {
    match (t, f) {
        (Wff::Atom(p, xs), Wff::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, binds))
        }
        (Wff::Not(a), Wff::Not(b)) => match_wff(a, b, binds),
        (Wff::Implies(a, b), Wff::Implies(c, d))
        | (Wff::And(a, b), Wff::And(c, d))
        | (Wff::Or(a, b), Wff::Or(c, d))
        | (Wff::Iff(a, b), Wff::Iff(c, d)) => match_wff(a, c, binds) && match_wff(b, d, binds),
        (Wff::ForAll(x, a), Wff::ForAll(y, b)) | (Wff::Exists(x, a), Wff::Exists(y, b)) => {
            x == y && match_wff(a, b, binds)
        }
        _ => false,
    }
}

/// Recognizes `f` as a rule formula for `rule` (after desugaring both sides).
pub fn match_rule_formula(f: &Wff, rule: &str) -> Option<RuleInstance> {
    let template = rule_formula(rule, HOLES[0], HOLES[1], HOLES[2]).desugar();
    let mut binds = [None, None, None];
    if !match_wff(&template, &f.desugar(), &mut binds) {
        return None;
    }
    let [learner, teacher, target] = binds;
    Some(RuleInstance { learner: learner?, teacher: teacher?, target: target? })
}

/// Whether `f` is a rule formula for any rule.
pub fn is_rule_formula(f: &Wff) -> bool {
    let mut preds = Vec::new();
    collect_atoms(&f.desugar(), &mut preds);
    preds
        .iter()
        .find_map(|p| p.strip_prefix("Learnable_"))
        .is_some_and(|rule| match_rule_formula(f, rule).is_some())
}

fn collect_atoms(f: &Wff, out: &mut Vec<String>) {
    match f {
        Wff::Atom(p, _) => out.push(p.clone()),
        _ => f.children().into_iter().for_each(|c| collect_atoms(c, out)),
    }
}
