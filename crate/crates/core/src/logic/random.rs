//! Seeded generation of well-formed formulas, plus a mutation that breaks well-formedness by
//! planting a symbol beneath its own application.

use rand::seq::IndexedRandom;
use rand::Rng;

use super::ast::{Binder, Term, Wff};
use super::signature::Signature;

#[derive(Debug, Clone)]
pub struct GenConfig {
    /// Maximum connective nesting depth.
    pub max_depth: usize,
    /// Maximum nesting depth of terms inside atoms.
    pub max_term_depth: usize,
    /// Individual variable names available to quantifiers.
    pub variables: Vec<String>,
    /// Emit `&`, `|`, `<->` and `exists` as well as the primitive connectives.
    pub sugar: bool,
    /// Allow quantifiers over declared function and predicate symbols.
    pub higher_order: bool,
    /// Only emit closed formulas (every variable bound).
    pub closed: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_depth: 4,
            max_term_depth: 2,
            variables: vec!["x".into(), "y".into(), "z".into()],
            sugar: true,
            higher_order: true,
            closed: false,
        }
    }
}

/// Random formula generator over a fixed signature.
pub struct FormulaGen<'a> {
    sig: &'a Signature,
    config: GenConfig,
    constants: Vec<String>,
    functions: Vec<(String, usize)>,
    predicates: Vec<(String, usize)>,
}

impl<'a> FormulaGen<'a> {
    /// Variable names that clash with declared symbols are dropped from the config.
    pub fn new(sig: &'a Signature, mut config: GenConfig) -> Self {
        config.variables.retain(|v| !sig.contains(v));
        FormulaGen {
            sig,
            constants: sig.constants().map(str::to_string).collect(),
            functions: sig.functions().map(|(f, a)| (f.to_string(), a)).collect(),
            predicates: sig.predicates().map(|(p, a)| (p.to_string(), a)).collect(),
            config,
        }
    }

    pub fn signature(&self) -> &Signature {
        self.sig
    }

    pub fn formula<R: Rng + ?Sized>(&self, rng: &mut R) -> Wff {
        assert!(!self.predicates.is_empty(), "signature declares no predicates");
        self.wff(rng, self.config.max_depth, &mut Vec::new())
    }

    fn wff<R: Rng + ?Sized>(&self, rng: &mut R, depth: usize, bound: &mut Vec<String>) -> Wff {
        if depth == 0 || rng.random_bool(0.25) {
            return self.atom(rng, bound);
        }
        let choices: &[u8] = if self.config.sugar {
            &[0, 1, 2, 3, 4, 5, 6]
        } else {
            &[0, 1, 2]
        };
        match *choices.choose(rng).unwrap() {
            0 => Wff::not(self.wff(rng, depth - 1, bound)),
            1 => {
                let a = self.wff(rng, depth - 1, bound);
                Wff::implies(a, self.wff(rng, depth - 1, bound))
            }
            2 => self.quantified(rng, depth, bound, false),
            6 => self.quantified(rng, depth, bound, true),
            op => {
                let a = self.wff(rng, depth - 1, bound);
                let b = self.wff(rng, depth - 1, bound);
                match op {
                    3 => Wff::and(a, b),
                    4 => Wff::or(a, b),
                    _ => Wff::iff(a, b),
                }
            }
        }
    }

    fn quantified<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        depth: usize,
        bound: &mut Vec<String>,
        existential: bool,
    ) -> Wff {
        let binder = if self.config.higher_order && rng.random_bool(0.15) {
            let pool: Vec<Binder> = self
                .predicates
                .iter()
                .map(|(p, _)| Binder::predicate(p.clone()))
                .chain(self.functions.iter().map(|(f, _)| Binder::function(f.clone())))
                .collect();
            pool.choose(rng).cloned()
        } else {
            None
        };
        let binder = match binder {
            Some(b) => b,
            None if self.config.variables.is_empty() => {
                return self.wff(rng, depth - 1, bound);
            }
            None => Binder::var(self.config.variables.choose(rng).unwrap().clone()),
        };
        let individual = binder.kind == super::ast::BinderKind::Individual;
        if individual {
            bound.push(binder.name.clone());
        }
        let body = self.wff(rng, depth - 1, bound);
        if individual {
            bound.pop();
        }
        if existential {
            Wff::exists(binder, body)
        } else {
            Wff::forall(binder, body)
        }
    }

    fn atom<R: Rng + ?Sized>(&self, rng: &mut R, bound: &[String]) -> Wff {
        let (p, arity) = self.predicates.choose(rng).unwrap().clone();
        let mut forbidden = vec![p.clone()];
        let args = (0..arity)
            .map(|_| self.term(rng, self.config.max_term_depth, bound, &mut forbidden))
            .collect();
        Wff::Atom(p, args)
    }

    fn leaf<R: Rng + ?Sized>(&self, rng: &mut R, bound: &[String]) -> Term {
        let vars: &[String] = if self.config.closed { bound } else { &self.config.variables };
        let use_var = !vars.is_empty() && (self.constants.is_empty() || rng.random_bool(0.5));
        if use_var {
            Term::Var(vars.choose(rng).unwrap().clone())
        } else if let Some(c) = self.constants.choose(rng) {
            Term::Const(c.clone())
        } else {
            // No constants and nothing bound: fall back to a free variable even in closed mode.
            Term::Var(self.config.variables.first().cloned().unwrap_or_else(|| "x".into()))
        }
    }

    fn term<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        depth: usize,
        bound: &[String],
        forbidden: &mut Vec<String>,
    ) -> Term {
        if depth == 0 || rng.random_bool(0.6) {
            return self.leaf(rng, bound);
        }
        let candidates: Vec<(bool, &String, usize)> = self
            .functions
            .iter()
            .map(|(f, a)| (false, f, *a))
            .chain(self.predicates.iter().map(|(p, a)| (true, p, *a)))
            .filter(|(_, name, _)| !forbidden.contains(name))
            .collect();
        let Some(&(is_pred, name, arity)) = candidates.choose(rng) else {
            return self.leaf(rng, bound);
        };
        forbidden.push(name.clone());
        let args = (0..arity)
            .map(|_| self.term(rng, depth - 1, bound, forbidden))
            .collect();
        forbidden.pop();
        if is_pred {
            Term::Pred(name.clone(), args)
        } else {
            Term::App(name.clone(), args)
        }
    }
}

/// Where a symbol application sits inside a formula.
enum Site {
    Atom(Vec<usize>),
    Term(Vec<usize>, Vec<usize>),
}

fn collect_sites(w: &Wff, path: &mut Vec<usize>, out: &mut Vec<Site>) {
    match w {
        Wff::Atom(_, args) => {
            if !args.is_empty() {
                out.push(Site::Atom(path.clone()));
            }
            for (i, a) in args.iter().enumerate() {
                collect_term_sites(a, path, &mut vec![i], out);
            }
        }
        _ => {
            for (i, c) in w.children().into_iter().enumerate() {
                path.push(i);
                collect_sites(c, path, out);
                path.pop();
            }
        }
    }
}

fn collect_term_sites(t: &Term, wpath: &[usize], tpath: &mut Vec<usize>, out: &mut Vec<Site>) {
    if let Term::App(_, args) | Term::Pred(_, args) = t {
        if !args.is_empty() {
            out.push(Site::Term(wpath.to_vec(), tpath.clone()));
        }
        for (i, a) in args.iter().enumerate() {
            tpath.push(i);
            collect_term_sites(a, wpath, tpath, out);
            tpath.pop();
        }
    }
}

fn wff_at_mut<'w>(w: &'w mut Wff, path: &[usize]) -> &'w mut Wff {
    let Some((&first, rest)) = path.split_first() else {
        return w;
    };
    let child = match w {
        Wff::Not(a) | Wff::ForAll(_, a) | Wff::Exists(_, a) => a,
        Wff::Implies(a, b) | Wff::And(a, b) | Wff::Or(a, b) | Wff::Iff(a, b) => {
            if first == 0 {
                a
            } else {
                b
            }
        }
        Wff::Atom(..) => unreachable!("path descends below an atom"),
    };
    wff_at_mut(child, rest)
}

fn term_at_mut<'t>(args: &'t mut [Term], path: &[usize]) -> &'t mut Term {
    let (&first, rest) = path.split_first().expect("non-empty term path");
    let t = &mut args[first];
    if rest.is_empty() {
        return t;
    }
    match t {
        Term::App(_, inner) | Term::Pred(_, inner) => term_at_mut(inner, rest),
        _ => unreachable!("path descends below a leaf term"),
    }
}

/// Replaces one argument of a random application with a term that mentions the applied
/// symbol, either directly (`P(P(..))`) or through a wrapper function (`P(f(P(..)))`).
/// Returns `None` when the formula contains no application with arguments.
pub fn inject_self_application<R: Rng + ?Sized>(
    f: &Wff,
    sig: &Signature,
    rng: &mut R,
) -> Option<Wff> {
    let mut sites = Vec::new();
    collect_sites(f, &mut Vec::new(), &mut sites);
    let site = sites.choose(rng)?;
    let mut out = f.clone();
    let (symbol, is_pred, args): (String, bool, &mut Vec<Term>) = match site {
        Site::Atom(wpath) => match wff_at_mut(&mut out, wpath) {
            Wff::Atom(p, args) => (p.clone(), true, args),
            _ => unreachable!(),
        },
        Site::Term(wpath, tpath) => {
            let Wff::Atom(_, atom_args) = wff_at_mut(&mut out, wpath) else {
                unreachable!()
            };
            match term_at_mut(atom_args, tpath) {
                Term::App(g, args) => (g.clone(), false, args),
                Term::Pred(g, args) => (g.clone(), true, args),
                _ => unreachable!(),
            }
        }
    };
    let arity = sig.arity(&symbol).unwrap_or(args.len());
    let filler = || Term::Var("x".into());
    let inner_args: Vec<Term> = (0..arity).map(|_| filler()).collect();
    let mut planted = if is_pred {
        Term::Pred(symbol.clone(), inner_args)
    } else {
        Term::App(symbol.clone(), inner_args)
    };
    let wrappers: Vec<(&str, usize)> = sig.functions().filter(|(g, _)| *g != symbol).collect();
    if rng.random_bool(0.5) {
        if let Some(&(g, ga)) = wrappers.choose(rng) {
            let mut wrapped: Vec<Term> = (0..ga).map(|_| filler()).collect();
            let slot = rng.random_range(0..ga);
            wrapped[slot] = planted;
            planted = Term::App(g.to_string(), wrapped);
        }
    }
    let slot = rng.random_range(0..args.len());
    args[slot] = planted;
    Some(out)
}
