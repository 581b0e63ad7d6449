//! Grounding: expansion of quantifiers over a finite domain into quantifier-free,
//! variable-free formulas over ground atoms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::budget::QuantifierBudget;
use super::error::ModelError;
use super::eval::{binder_arity, for_each_table, lookup, Bind, Env};
use super::interpretation::Interpretation;
use crate::logic::{BinderKind, Signature, Term, Wff};

/// A propositional letter of a grounded formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundAtom {
    /// `predicate(args)` holds.
    Holds { predicate: String, args: Vec<usize> },
    /// `function(args)` denotes `value`. Only produced when function tables are unknown.
    Value {
        function: String,
        args: Vec<usize>,
        value: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ground {
    True,
    False,
    Atom(GroundAtom),
    Not(Box<Ground>),
    And(Vec<Ground>),
    Or(Vec<Ground>),
    Implies(Box<Ground>, Box<Ground>),
    Iff(Box<Ground>, Box<Ground>),
}

impl Ground {
    pub fn and(items: Vec<Ground>) -> Ground {
        let mut out = Vec::with_capacity(items.len());
        for g in items {
            match g {
                Ground::True => {}
                Ground::False => return Ground::False,
                Ground::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Ground::True,
            1 => out.pop().unwrap(),
            _ => Ground::And(out),
        }
    }

    pub fn or(items: Vec<Ground>) -> Ground {
        let mut out = Vec::with_capacity(items.len());
        for g in items {
            match g {
                Ground::False => {}
                Ground::True => return Ground::True,
                Ground::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Ground::False,
            1 => out.pop().unwrap(),
            _ => Ground::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(g: Ground) -> Ground {
        match g {
            Ground::True => Ground::False,
            Ground::False => Ground::True,
            Ground::Not(inner) => *inner,
            other => Ground::Not(Box::new(other)),
        }
    }

    pub fn implies(a: Ground, b: Ground) -> Ground {
        match (a, b) {
            (Ground::False, _) | (_, Ground::True) => Ground::True,
            (Ground::True, b) => b,
            (a, Ground::False) => Ground::not(a),
            (a, b) => Ground::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: Ground, b: Ground) -> Ground {
        match (a, b) {
            (Ground::True, x) | (x, Ground::True) => x,
            (Ground::False, x) | (x, Ground::False) => Ground::not(x),
            (a, b) => Ground::Iff(Box::new(a), Box::new(b)),
        }
    }

    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut BTreeSet<GroundAtom>) {
        match self {
            Ground::True | Ground::False => {}
            Ground::Atom(a) => {
                out.insert(a.clone());
            }
            Ground::Not(a) => a.collect_atoms(out),
            Ground::And(items) | Ground::Or(items) => items.iter().for_each(|g| g.collect_atoms(out)),
            Ground::Implies(a, b) | Ground::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    /// Truth value under an assignment of atoms.
    pub fn eval_with(&self, value: &mut impl FnMut(&GroundAtom) -> Result<bool, ModelError>) -> Result<bool, ModelError> {
        Ok(match self {
            Ground::True => true,
            Ground::False => false,
            Ground::Atom(a) => value(a)?,
            Ground::Not(a) => !a.eval_with(value)?,
            Ground::And(items) => {
                for g in items {
                    if !g.eval_with(value)? {
                        return Ok(false);
                    }
                }
                true
            }
            Ground::Or(items) => {
                for g in items {
                    if g.eval_with(value)? {
                        return Ok(true);
                    }
                }
                false
            }
            Ground::Implies(a, b) => !a.eval_with(value)? || b.eval_with(value)?,
            Ground::Iff(a, b) => a.eval_with(value)? == b.eval_with(value)?,
        })
    }
}

pub(crate) fn atom_text(a: &GroundAtom, names: &[String]) -> String {
    let list = |args: &[usize]| {
        args.iter()
            .map(|&e| names[e].as_str())
            .collect::<Vec<_>>()
            .join(", ")
    };
    match a {
        GroundAtom::Holds { predicate, args } if args.is_empty() => predicate.clone(),
        GroundAtom::Holds { predicate, args } => format!("{predicate}({})", list(args)),
        GroundAtom::Value { function, args, value } => {
            format!("{function}({}) = {}", list(args), names[*value])
        }
    }
}

fn write_ground(out: &mut fmt::Formatter<'_>, g: &Ground, names: &[String], parent: u8) -> fmt::Result {
    // precedence: iff 1, implies 2, or 3, and 4, atoms and negation 5
    let (prec, text): (u8, String) = match g {
        Ground::True => (5, "true".into()),
        Ground::False => (5, "false".into()),
        Ground::Atom(a) => (5, atom_text(a, names)),
        _ => (0, String::new()),
    };
    if prec == 5 {
        return out.write_str(&text);
    }
    let own = match g {
        Ground::Not(_) => 5,
        Ground::And(_) => 4,
        Ground::Or(_) => 3,
        Ground::Implies(..) => 2,
        _ => 1,
    };
    let parens = own < parent || (own == parent && own != 5);
    if parens {
        out.write_str("(")?;
    }
    match g {
        Ground::Not(a) => {
            out.write_str("~")?;
            write_ground(out, a, names, 5)?;
        }
        Ground::And(items) | Ground::Or(items) => {
            let op = if own == 4 { " & " } else { " | " };
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.write_str(op)?;
                }
                write_ground(out, item, names, own + 1)?;
            }
        }
        Ground::Implies(a, b) | Ground::Iff(a, b) => {
            let op = if own == 2 { " -> " } else { " <-> " };
            write_ground(out, a, names, own + 1)?;
            out.write_str(op)?;
            write_ground(out, b, names, own + 1)?;
        }
        _ => unreachable!(),
    }
    if parens {
        out.write_str(")")?;
    }
    Ok(())
}

/// A grounded formula together with the names of the domain it was grounded over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundFormula {
    pub formula: Ground,
    pub domain: Vec<String>,
}

impl GroundFormula {
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        self.formula.atoms()
    }

    /// Truth value with atoms looked up in the interpretation's tables.
    pub fn evaluate(&self, interp: &Interpretation) -> Result<bool, ModelError> {
        self.formula.eval_with(&mut |a| match a {
            GroundAtom::Holds { predicate, args } => interp.holds(predicate, args),
            GroundAtom::Value { function, args, value } => Ok(interp.apply(function, args)? == *value),
        })
    }
}

impl fmt::Display for GroundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_ground(f, &self.formula, &self.domain, 0)
    }
}

/// Where grounding gets the meaning of constants, functions and predicate terms from.
pub(crate) trait Structure {
    fn signature(&self) -> &Signature;
    fn names(&self) -> &[String];
    fn constant(&self, name: &str) -> Result<usize, ModelError>;
    /// The possible values of `function(args)`, each guarded by a condition.
    fn function_cases(&self, function: &str, args: &[usize]) -> Result<Vec<(Ground, usize)>, ModelError>;
    fn designated(&self) -> Result<(usize, usize), ModelError>;
}

impl Structure for Interpretation {
    fn signature(&self) -> &Signature {
        Interpretation::signature(self)
    }

    fn names(&self) -> &[String] {
        self.domain()
    }

    fn constant(&self, name: &str) -> Result<usize, ModelError> {
        Interpretation::constant(self, name)
    }

    fn function_cases(&self, function: &str, args: &[usize]) -> Result<Vec<(Ground, usize)>, ModelError> {
        Ok(vec![(Ground::True, self.apply(function, args)?)])
    }

    fn designated(&self) -> Result<(usize, usize), ModelError> {
        Interpretation::designated(self).ok_or(ModelError::NoDesignatedElements)
    }
}

/// A domain whose constants are fixed distinct elements and whose function tables and
/// relations are left open, to be decided by satisfiability search.
#[derive(Debug, Clone)]
pub(crate) struct SymbolicDomain {
    pub signature: Signature,
    pub names: Vec<String>,
    pub constants: BTreeMap<String, usize>,
    pub designated: Option<(usize, usize)>,
}

impl Structure for SymbolicDomain {
    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn names(&self) -> &[String] {
        &self.names
    }

    fn constant(&self, name: &str) -> Result<usize, ModelError> {
        self.constants
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::MissingConstant(name.to_string()))
    }

    fn function_cases(&self, function: &str, args: &[usize]) -> Result<Vec<(Ground, usize)>, ModelError> {
        if self.signature.function_arity(function).is_none() {
            return Err(ModelError::UnknownSymbol(function.to_string()));
        }
        Ok((0..self.names.len())
            .map(|v| {
                let atom = GroundAtom::Value {
                    function: function.to_string(),
                    args: args.to_vec(),
                    value: v,
                };
                (Ground::Atom(atom), v)
            })
            .collect())
    }

    fn designated(&self) -> Result<(usize, usize), ModelError> {
        self.designated.ok_or(ModelError::NoDesignatedElements)
    }
}

pub(crate) struct Grounder<'a, S: Structure> {
    pub structure: &'a S,
    pub budget: &'a QuantifierBudget,
}

type Cases = Vec<(Ground, usize)>;

impl<S: Structure> Grounder<'_, S> {
    fn size(&self) -> usize {
        self.structure.names().len()
    }

    fn combos(&self, args: &[Term], env: &Env) -> Result<Vec<(Ground, Vec<usize>)>, ModelError> {
        let mut acc = vec![(Ground::True, Vec::with_capacity(args.len()))];
        for a in args {
            let cases = self.term(a, env)?;
            let mut next = Vec::with_capacity(acc.len() * cases.len());
            for (cond, vals) in &acc {
                for (c, e) in &cases {
                    let mut v = vals.clone();
                    v.push(*e);
                    next.push((Ground::and(vec![cond.clone(), c.clone()]), v));
                }
            }
            acc = next;
        }
        Ok(acc)
    }

    fn predicate_atom(&self, p: &str, vals: Vec<usize>, env: &Env) -> Result<Ground, ModelError> {
        match lookup(env, p) {
            Some(Bind::Rel(rel)) => Ok(if rel.contains(&vals, self.size()) {
                Ground::True
            } else {
                Ground::False
            }),
            _ => {
                if self.structure.signature().predicate_arity(p).is_none() {
                    return Err(ModelError::UnknownSymbol(p.to_string()));
                }
                Ok(Ground::Atom(GroundAtom::Holds { predicate: p.to_string(), args: vals }))
            }
        }
    }

    fn term(&self, t: &Term, env: &Env) -> Result<Cases, ModelError> {
        match t {
            Term::Var(x) => match lookup(env, x) {
                Some(Bind::Elem(e)) => Ok(vec![(Ground::True, *e)]),
                _ => Err(ModelError::FreeVariable(x.clone())),
            },
            Term::Const(c) => Ok(vec![(Ground::True, self.structure.constant(c)?)]),
            Term::App(f, args) => {
                let mut out = Vec::new();
                for (cond, vals) in self.combos(args, env)? {
                    match lookup(env, f) {
                        Some(Bind::Func(table)) => out.push((cond, table.apply(&vals, self.size()))),
                        _ => {
                            for (c, v) in self.structure.function_cases(f, &vals)? {
                                out.push((Ground::and(vec![cond.clone(), c]), v));
                            }
                        }
                    }
                }
                Ok(out)
            }
            Term::Pred(p, args) => {
                let (top, bottom) = self.structure.designated()?;
                let mut out = Vec::new();
                for (cond, vals) in self.combos(args, env)? {
                    let atom = self.predicate_atom(p, vals, env)?;
                    let yes = Ground::and(vec![cond.clone(), atom.clone()]);
                    let no = Ground::and(vec![cond, Ground::not(atom)]);
                    if yes != Ground::False {
                        out.push((yes, top));
                    }
                    if no != Ground::False {
                        out.push((no, bottom));
                    }
                }
                Ok(out)
            }
        }
    }

    pub fn wff(&self, w: &Wff, env: &mut Env) -> Result<Ground, ModelError> {
        Ok(match w {
            Wff::Atom(p, args) => {
                let mut alts = Vec::new();
                for (cond, vals) in self.combos(args, env)? {
                    let atom = self.predicate_atom(p, vals, env)?;
                    alts.push(Ground::and(vec![cond, atom]));
                }
                Ground::or(alts)
            }
            Wff::Not(a) => Ground::not(self.wff(a, env)?),
            Wff::Implies(a, b) => Ground::implies(self.wff(a, env)?, self.wff(b, env)?),
            Wff::And(a, b) => Ground::and(vec![self.wff(a, env)?, self.wff(b, env)?]),
            Wff::Or(a, b) => Ground::or(vec![self.wff(a, env)?, self.wff(b, env)?]),
            Wff::Iff(a, b) => Ground::iff(self.wff(a, env)?, self.wff(b, env)?),
            Wff::ForAll(x, body) | Wff::Exists(x, body) => {
                let universal = matches!(w, Wff::ForAll(..));
                let mut parts = Vec::new();
                if x.kind == BinderKind::Individual {
                    for e in 0..self.size() {
                        env.push((x.name.clone(), Bind::Elem(e)));
                        let g = self.wff(body, env);
                        env.pop();
                        parts.push(g?);
                    }
                } else {
                    let arity = binder_arity(self.structure.signature(), &x.name, x.kind)?;
                    for_each_table(x.kind, &x.name, arity, self.size(), self.budget, |bind| {
                        env.push((x.name.clone(), bind));
                        let g = self.wff(body, env);
                        env.pop();
                        parts.push(g?);
                        Ok(false)
                    })?;
                }
                if universal {
                    Ground::and(parts)
                } else {
                    Ground::or(parts)
                }
            }
        })
    }
}

/// Expands every quantifier of a closed formula over the interpretation's domain. Constants
/// and function applications are resolved through the interpretation's tables; relations stay
/// symbolic, so the result can be evaluated against any relation tables over the same domain.
pub fn ground(
    f: &Wff,
    interp: &Interpretation,
    budget: &QuantifierBudget,
) -> Result<GroundFormula, ModelError> {
    let g = Grounder { structure: interp, budget };
    let formula = g.wff(f, &mut Vec::new())?;
    Ok(GroundFormula { formula, domain: interp.domain().to_vec() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn sig() -> Signature {
        Signature::from_json_str(r#"{"constants":["a"],"predicates":{"P":1,"A1":1,"R":2}}"#).unwrap()
    }

    fn interp(names: &[&str]) -> Interpretation {
        let mut i = Interpretation::new(sig(), names.iter().copied()).unwrap();
        i.set_constant("a", names[0]).unwrap();
        i
    }

    #[test]
    fn universal_expands_to_conjunction() {
        let f = parse_formula("forall x. P(x)", &sig()).unwrap();
        let g = ground(&f, &interp(&["d1", "d2"]), &QuantifierBudget::default()).unwrap();
        assert_eq!(g.to_string(), "P(d1) & P(d2)");
    }

    #[test]
    fn existential_expands_to_disjunction() {
        let f = parse_formula("exists x. P(x)", &sig()).unwrap();
        let g = ground(&f, &interp(&["d1", "d2"]), &QuantifierBudget::default()).unwrap();
        assert_eq!(g.to_string(), "P(d1) | P(d2)");
    }

    #[test]
    fn higher_order_over_large_domain_is_refused() {
        let f = parse_formula("forall A1. A1(a)", &sig()).unwrap();
        let err = ground(&f, &interp(&["d1", "d2", "d3", "d4", "d5"]), &QuantifierBudget::default())
            .unwrap_err();
        assert!(matches!(err, ModelError::BudgetExceeded { count: 32, .. }), "{err}");
    }

    #[test]
    fn higher_order_binding_folds_to_constants() {
        // every unary relation either contains a or not: the formula is valid
        let f = parse_formula("forall A1. A1(a) | ~A1(a)", &sig()).unwrap();
        let g = ground(&f, &interp(&["d1", "d2"]), &QuantifierBudget::default()).unwrap();
        assert_eq!(g.formula, Ground::True);
    }

    #[test]
    fn nested_display_parenthesizes() {
        let f = parse_formula("forall x. exists y. R(x, y)", &sig()).unwrap();
        let g = ground(&f, &interp(&["d1", "d2"]), &QuantifierBudget::default()).unwrap();
        assert_eq!(
            g.to_string(),
            "(R(d1, d1) | R(d1, d2)) & (R(d2, d1) | R(d2, d2))"
        );
    }
}
