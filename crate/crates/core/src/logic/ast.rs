//! Abstract syntax of terms and formulas.

use std::collections::{BTreeMap, BTreeSet};

/// A term. Predicates applied to terms are terms too ([`Term::Pred`]), distinct from atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
    Pred(String, Vec<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BinderKind {
    Individual,
    Function,
    Predicate,
}

/// The symbol bound by a quantifier: an individual variable or a declared function/predicate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Binder {
    pub name: String,
    pub kind: BinderKind,
}

impl Binder {
    pub fn var(name: impl Into<String>) -> Self {
        Binder { name: name.into(), kind: BinderKind::Individual }
    }

    pub fn function(name: impl Into<String>) -> Self {
        Binder { name: name.into(), kind: BinderKind::Function }
    }

    pub fn predicate(name: impl Into<String>) -> Self {
        Binder { name: name.into(), kind: BinderKind::Predicate }
    }
}

/// A formula. `Atom`, `Not`, `Implies` and `ForAll` are primitive; the rest is sugar kept for
/// display and removed by [`Wff::desugar`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Wff {
    Atom(String, Vec<Term>),
    Not(Box<Wff>),
    Implies(Box<Wff>, Box<Wff>),
    ForAll(Binder, Box<Wff>),
    And(Box<Wff>, Box<Wff>),
    Or(Box<Wff>, Box<Wff>),
    Iff(Box<Wff>, Box<Wff>),
    Exists(Binder, Box<Wff>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn cst(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(name.into(), args)
    }

    pub fn pred(name: impl Into<String>, args: Vec<Term>) -> Term {
        Term::Pred(name.into(), args)
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) | Term::Const(_) => &[],
            Term::App(_, args) | Term::Pred(_, args) => args,
        }
    }

    /// True when no variable occurs in the term.
    pub fn is_closed(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) | Term::Pred(_, args) => args.iter().all(Term::is_closed),
        }
    }

    fn collect_vars(&self, bound: &[String], out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(v) {
                    out.insert(v.clone());
                }
            }
            Term::Const(_) => {}
            Term::App(_, args) | Term::Pred(_, args) => {
                args.iter().for_each(|a| a.collect_vars(bound, out))
            }
        }
    }

    fn substitute(&self, map: &BTreeMap<String, Term>, bound: &[String]) -> Term {
        match self {
            Term::Var(v) if !bound.contains(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(map, bound)).collect())
            }
            Term::Pred(p, args) => {
                Term::Pred(p.clone(), args.iter().map(|a| a.substitute(map, bound)).collect())
            }
        }
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(_) | Term::Const(_) => {}
            Term::App(f, args) | Term::Pred(f, args) => {
                out.insert(f.clone());
                args.iter().for_each(|a| a.collect_symbols(out));
            }
        }
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::App(_, args) | Term::Pred(_, args) => {
                args.iter().for_each(|a| a.collect_constants(out))
            }
        }
    }

    fn has_predicate_term(&self) -> bool {
        match self {
            Term::Var(_) | Term::Const(_) => false,
            Term::Pred(..) => true,
            Term::App(_, args) => args.iter().any(Term::has_predicate_term),
        }
    }
}

fn boxed(f: Wff) -> Box<Wff> {
    Box::new(f)
}

impl Wff {
    pub fn atom(name: impl Into<String>, args: Vec<Term>) -> Wff {
        Wff::Atom(name.into(), args)
    }

    /// Nullary atom (propositional letter).
    pub fn prop(name: impl Into<String>) -> Wff {
        Wff::Atom(name.into(), Vec::new())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Wff) -> Wff {
        Wff::Not(boxed(f))
    }

    pub fn implies(a: Wff, b: Wff) -> Wff {
        Wff::Implies(boxed(a), boxed(b))
    }

    pub fn and(a: Wff, b: Wff) -> Wff {
        Wff::And(boxed(a), boxed(b))
    }

    pub fn or(a: Wff, b: Wff) -> Wff {
        Wff::Or(boxed(a), boxed(b))
    }

    pub fn iff(a: Wff, b: Wff) -> Wff {
        Wff::Iff(boxed(a), boxed(b))
    }

    pub fn forall(binder: Binder, body: Wff) -> Wff {
        Wff::ForAll(binder, boxed(body))
    }

    pub fn exists(binder: Binder, body: Wff) -> Wff {
        Wff::Exists(binder, boxed(body))
    }

    /// Left-nested conjunction; `None` for an empty list.
    pub fn conjoin<I: IntoIterator<Item = Wff>>(items: I) -> Option<Wff> {
        items.into_iter().reduce(Wff::and)
    }

    /// Rewrites sugar into `~`, `->` and `forall`.
    ///
    /// `a & b` becomes `~(a -> ~b)`, `a | b` becomes `~a -> b`, `a <-> b` becomes
    /// `~((a -> b) -> ~(b -> a))` and `exists x. a` becomes `~forall x. ~a`.
    pub fn desugar(&self) -> Wff {
        match self {
            Wff::Atom(..) => self.clone(),
            Wff::Not(a) => Wff::not(a.desugar()),
            Wff::Implies(a, b) => Wff::implies(a.desugar(), b.desugar()),
            Wff::ForAll(x, a) => Wff::forall(x.clone(), a.desugar()),
            Wff::And(a, b) => Wff::not(Wff::implies(a.desugar(), Wff::not(b.desugar()))),
            Wff::Or(a, b) => Wff::implies(Wff::not(a.desugar()), b.desugar()),
            Wff::Iff(a, b) => {
                let (a, b) = (a.desugar(), b.desugar());
                Wff::not(Wff::implies(
                    Wff::implies(a.clone(), b.clone()),
                    Wff::not(Wff::implies(b, a)),
                ))
            }
            Wff::Exists(x, a) => Wff::not(Wff::forall(x.clone(), Wff::not(a.desugar()))),
        }
    }

    /// Recognizes the shapes produced by [`Wff::desugar`] and folds them back into sugar,
    /// matching outermost shapes first. `resugar(desugar(f)) == f` whenever `f` is itself a
    /// fixed point of `resugar`.
    pub fn resugar(&self) -> Wff {
        match self {
            Wff::Atom(..) => self.clone(),
            Wff::Not(inner) => match &**inner {
                Wff::Implies(a, nb) => match &**nb {
                    Wff::Not(b) => match (&**a, &**b) {
                        (Wff::Implies(p, q), Wff::Implies(q2, p2)) if p == p2 && q == q2 => {
                            Wff::iff(p.resugar(), q.resugar())
                        }
                        _ => Wff::and(a.resugar(), b.resugar()),
                    },
                    _ => Wff::not(inner.resugar()),
                },
                Wff::ForAll(x, body) => match &**body {
                    Wff::Not(a) => Wff::exists(x.clone(), a.resugar()),
                    _ => Wff::not(inner.resugar()),
                },
                _ => Wff::not(inner.resugar()),
            },
            Wff::Implies(a, b) => match &**a {
                Wff::Not(na) => Wff::or(na.resugar(), b.resugar()),
                _ => Wff::implies(a.resugar(), b.resugar()),
            },
            Wff::ForAll(x, a) => Wff::forall(x.clone(), a.resugar()),
            Wff::And(a, b) => Wff::and(a.resugar(), b.resugar()),
            Wff::Or(a, b) => Wff::or(a.resugar(), b.resugar()),
            Wff::Iff(a, b) => Wff::iff(a.resugar(), b.resugar()),
            Wff::Exists(x, a) => Wff::exists(x.clone(), a.resugar()),
        }
    }

    /// True if the formula uses only primitive connectives.
    pub fn is_core(&self) -> bool {
        match self {
            Wff::Atom(..) => true,
            Wff::Not(a) | Wff::ForAll(_, a) => a.is_core(),
            Wff::Implies(a, b) => a.is_core() && b.is_core(),
            Wff::And(..) | Wff::Or(..) | Wff::Iff(..) | Wff::Exists(..) => false,
        }
    }

    pub fn children(&self) -> Vec<&Wff> {
        match self {
            Wff::Atom(..) => vec![],
            Wff::Not(a) | Wff::ForAll(_, a) | Wff::Exists(_, a) => vec![a],
            Wff::Implies(a, b) | Wff::And(a, b) | Wff::Or(a, b) | Wff::Iff(a, b) => vec![a, b],
        }
    }

    /// Free individual variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Wff::Atom(_, args) => args.iter().for_each(|t| t.collect_vars(bound, out)),
            Wff::ForAll(b, a) | Wff::Exists(b, a) => {
                let pushed = b.kind == BinderKind::Individual;
                if pushed {
                    bound.push(b.name.clone());
                }
                a.collect_free(bound, out);
                if pushed {
                    bound.pop();
                }
            }
            _ => self.children().into_iter().for_each(|c| c.collect_free(bound, out)),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Replaces free occurrences of individual variables.
    pub fn substitute(&self, map: &BTreeMap<String, Term>) -> Wff {
        self.subst_inner(map, &mut Vec::new())
    }

    fn subst_inner(&self, map: &BTreeMap<String, Term>, bound: &mut Vec<String>) -> Wff {
        match self {
            Wff::Atom(p, args) => {
                Wff::Atom(p.clone(), args.iter().map(|t| t.substitute(map, bound)).collect())
            }
            Wff::Not(a) => Wff::not(a.subst_inner(map, bound)),
            Wff::Implies(a, b) => Wff::implies(a.subst_inner(map, bound), b.subst_inner(map, bound)),
            Wff::And(a, b) => Wff::and(a.subst_inner(map, bound), b.subst_inner(map, bound)),
            Wff::Or(a, b) => Wff::or(a.subst_inner(map, bound), b.subst_inner(map, bound)),
            Wff::Iff(a, b) => Wff::iff(a.subst_inner(map, bound), b.subst_inner(map, bound)),
            Wff::ForAll(x, a) | Wff::Exists(x, a) => {
                let pushed = x.kind == BinderKind::Individual;
                if pushed {
                    bound.push(x.name.clone());
                }
                let body = a.subst_inner(map, bound);
                if pushed {
                    bound.pop();
                }
                match self {
                    Wff::ForAll(..) => Wff::forall(x.clone(), body),
                    _ => Wff::exists(x.clone(), body),
                }
            }
        }
    }

    /// Function and predicate names occurring in the formula, including bound ones.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols(&self, out: &mut BTreeSet<String>) {
        match self {
            Wff::Atom(p, args) => {
                out.insert(p.clone());
                args.iter().for_each(|t| t.collect_symbols(out));
            }
            _ => self.children().into_iter().for_each(|c| c.collect_symbols(out)),
        }
    }

    /// Function and predicate names that occur free (not shadowed by a higher-order binder).
    pub fn free_symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free_symbols(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_symbols(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Wff::Atom(..) => {
                let mut here = BTreeSet::new();
                self.collect_symbols(&mut here);
                out.extend(here.into_iter().filter(|s| !bound.contains(s)));
            }
            Wff::ForAll(b, a) | Wff::Exists(b, a) => {
                let pushed = b.kind != BinderKind::Individual;
                if pushed {
                    bound.push(b.name.clone());
                }
                a.collect_free_symbols(bound, out);
                if pushed {
                    bound.pop();
                }
            }
            _ => self
                .children()
                .into_iter()
                .for_each(|c| c.collect_free_symbols(bound, out)),
        }
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut BTreeSet<String>) {
        match self {
            Wff::Atom(_, args) => args.iter().for_each(|t| t.collect_constants(out)),
            _ => self.children().into_iter().for_each(|c| c.collect_constants(out)),
        }
    }

    pub fn has_predicate_term(&self) -> bool {
        match self {
            Wff::Atom(_, args) => args.iter().any(Term::has_predicate_term),
            _ => self.children().into_iter().any(Wff::has_predicate_term),
        }
    }

    /// True for atoms and negated atoms.
    pub fn is_literal(&self) -> bool {
        match self {
            Wff::Atom(..) => true,
            Wff::Not(a) => matches!(**a, Wff::Atom(..)),
            _ => false,
        }
    }

    /// Number of nodes in the formula tree (terms excluded).
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Wff::size).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: &str) -> Wff {
        Wff::prop(n)
    }

    #[test]
    fn desugar_removes_all_sugar() {
        let f = Wff::iff(
            Wff::and(p("A"), p("B")),
            Wff::exists(Binder::var("x"), Wff::or(p("C"), p("D"))),
        );
        let d = f.desugar();
        assert!(d.is_core());
        assert_eq!(d.desugar(), d);
    }

    #[test]
    fn resugar_inverts_desugar_on_sugar_shapes() {
        for f in [
            Wff::and(p("A"), p("B")),
            Wff::or(p("A"), p("B")),
            Wff::iff(p("A"), p("B")),
            Wff::exists(Binder::var("x"), Wff::atom("P", vec![Term::var("x")])),
            Wff::implies(p("A"), Wff::not(p("B"))),
        ] {
            assert_eq!(f.desugar().resugar(), f, "{f:?}");
        }
    }

    #[test]
    fn free_vars_respect_binders() {
        let f = Wff::forall(
            Binder::var("x"),
            Wff::atom("R", vec![Term::var("x"), Term::var("y")]),
        );
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
    }

    #[test]
    fn substitution_skips_bound_occurrences() {
        let f = Wff::and(
            Wff::atom("P", vec![Term::var("x")]),
            Wff::forall(Binder::var("x"), Wff::atom("P", vec![Term::var("x")])),
        );
        let map = BTreeMap::from([("x".to_string(), Term::cst("a"))]);
        let g = f.substitute(&map);
        assert_eq!(
            g,
            Wff::and(
                Wff::atom("P", vec![Term::cst("a")]),
                Wff::forall(Binder::var("x"), Wff::atom("P", vec![Term::var("x")])),
            )
        );
    }

    #[test]
    fn higher_order_binders_shadow_symbols() {
        let f = Wff::forall(
            Binder::predicate("A1"),
            Wff::implies(Wff::atom("A1", vec![Term::var("x")]), Wff::atom("B", vec![Term::var("x")])),
        );
        assert_eq!(f.free_symbols().into_iter().collect::<Vec<_>>(), vec!["B".to_string()]);
        assert!(f.symbols().contains("A1"));
    }
}
