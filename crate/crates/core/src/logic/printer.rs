//! Canonical text rendering.
//!
//! Precedence, loosest first: `<->` (left), `->` (right), `|` (left), `&` (left), `~`.
//! Quantifier bodies extend as far right as possible, so a quantifier is parenthesized
//! whenever something follows it.

use std::fmt::{self, Display, Write};

use super::ast::{Term, Wff};

const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

impl Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) | Term::Const(name) => f.write_str(name),
            Term::App(name, args) | Term::Pred(name, args) => {
                f.write_str(name)?;
                if !args.is_empty() {
                    write_args(f, args)?;
                }
                Ok(())
            }
        }
    }
}

fn write_args(f: &mut impl Write, args: &[Term]) -> fmt::Result {
    f.write_char('(')?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_char(')')
}

fn binary(w: &Wff) -> Option<(&Wff, &Wff, &'static str, u8, bool)> {
    // (lhs, rhs, operator, precedence, right associative)
    match w {
        Wff::Iff(a, b) => Some((a, b, "<->", IFF, false)),
        Wff::Implies(a, b) => Some((a, b, "->", IMPLIES, true)),
        Wff::Or(a, b) => Some((a, b, "|", OR, false)),
        Wff::And(a, b) => Some((a, b, "&", AND, false)),
        _ => None,
    }
}

fn precedence(w: &Wff) -> u8 {
    match w {
        Wff::ForAll(..) | Wff::Exists(..) => 0,
        _ => binary(w).map(|(_, _, _, p, _)| p).unwrap_or(UNARY),
    }
}

/// Writes `w` in a context that requires precedence at least `min`. `trailing` is true when
/// nothing follows `w` in the output, which is the only place an unparenthesized quantifier
/// may appear.
fn write_wff(out: &mut impl Write, w: &Wff, min: u8, trailing: bool) -> fmt::Result {
    let quantifier = matches!(w, Wff::ForAll(..) | Wff::Exists(..));
    let needs_parens = if quantifier { !trailing } else { precedence(w) < min };
    if needs_parens {
        out.write_char('(')?;
        write_bare(out, w, true)?;
        out.write_char(')')
    } else {
        write_bare(out, w, trailing)
    }
}

fn write_bare(out: &mut impl Write, w: &Wff, trailing: bool) -> fmt::Result {
    match w {
        Wff::Atom(p, args) => {
            out.write_str(p)?;
            if !args.is_empty() {
                write_args(out, args)?;
            }
            Ok(())
        }
        Wff::Not(a) => {
            out.write_char('~')?;
            write_wff(out, a, UNARY, trailing)
        }
        Wff::ForAll(x, body) | Wff::Exists(x, body) => {
            let kw = if matches!(w, Wff::ForAll(..)) { "forall" } else { "exists" };
            write!(out, "{kw} {}. ", x.name)?;
            write_wff(out, body, 0, trailing)
        }
        _ => {
            let (a, b, op, prec, right_assoc) = binary(w).expect("binary connective");
            let (lmin, rmin) = if right_assoc { (prec + 1, prec) } else { (prec, prec + 1) };
            write_wff(out, a, lmin, false)?;
            write!(out, " {op} ")?;
            write_wff(out, b, rmin, trailing)
        }
    }
}

impl Display for Wff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_wff(f, self, 0, true)
    }
}

/// Canonical text of a formula.
pub fn format_formula(w: &Wff) -> String {
    w.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::Binder;

    fn p(n: &str) -> Wff {
        Wff::prop(n)
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(Wff::and(p("A"), p("B")).to_string(), "A & B");
        assert_eq!(Wff::implies(Wff::not(p("A")), p("B")).to_string(), "~A -> B");
        let ex = Wff::exists(Binder::var("x"), Wff::atom("P", vec![Term::var("x")]));
        assert_eq!(ex.to_string(), "exists x. P(x)");
    }

    #[test]
    fn associativity_parens() {
        let right = Wff::implies(p("A"), Wff::implies(p("B"), p("C")));
        assert_eq!(right.to_string(), "A -> B -> C");
        let left = Wff::implies(Wff::implies(p("A"), p("B")), p("C"));
        assert_eq!(left.to_string(), "(A -> B) -> C");
        let and_right = Wff::and(p("A"), Wff::and(p("B"), p("C")));
        assert_eq!(and_right.to_string(), "A & (B & C)");
        let mixed = Wff::and(Wff::or(p("A"), p("B")), p("C"));
        assert_eq!(mixed.to_string(), "(A | B) & C");
    }

    #[test]
    fn quantifiers_parenthesized_unless_trailing() {
        let q = Wff::forall(Binder::var("x"), Wff::atom("P", vec![Term::var("x")]));
        assert_eq!(Wff::and(p("A"), q.clone()).to_string(), "A & forall x. P(x)");
        assert_eq!(Wff::and(q.clone(), p("A")).to_string(), "(forall x. P(x)) & A");
        assert_eq!(
            Wff::implies(Wff::and(p("A"), q.clone()), p("B")).to_string(),
            "A & (forall x. P(x)) -> B"
        );
        assert_eq!(Wff::not(q).to_string(), "~forall x. P(x)");
    }

    #[test]
    fn terms_render_with_arguments() {
        let f = Wff::atom(
            "Gt",
            vec![Term::app("ftemp", vec![Term::var("Y"), Term::var("T2")]), Term::cst("c60")],
        );
        assert_eq!(f.to_string(), "Gt(ftemp(Y, T2), c60)");
    }
}
