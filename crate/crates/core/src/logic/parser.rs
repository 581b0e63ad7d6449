//! Recursive-descent parser for formula text.
//!
//! ```text
//! formula := imp ('<->' imp)*
//! imp     := or ('->' imp)?
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '~' unary | quant | '(' formula ')' | atom
//! quant   := ('forall' | 'exists') ident (',' ident)* '.' formula
//! atom    := ident ('(' term (',' term)* ')')?
//! term    := ident ('(' term (',' term)* ')')?
//! ```
//!
//! Identifiers are resolved against the signature while parsing: declared constants become
//! constants, declared functions and predicates in term position become applications, and
//! anything undeclared is a variable. `#` starts a comment running to the end of the line.

use thiserror::Error;

use super::ast::{Binder, Term, Wff};
use super::signature::{is_reserved, Signature, SymbolKind};
use super::validate::{validate_wff, Finding};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        position: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("unknown symbol `{name}` at byte {position}")]
    UnknownSymbol { name: String, position: usize },
    #[error("`{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("self-application of `{symbol}` at {path}")]
    SelfApplication { symbol: String, path: String },
    #[error("`{symbol}` is declared as a {declared} but used as a {expected}")]
    KindMismatch {
        symbol: String,
        expected: String,
        declared: String,
    },
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self {
            ParseError::Syntax { .. } => "syntax_error",
            ParseError::UnknownSymbol { .. } => "unknown_symbol",
            ParseError::ArityMismatch { .. } => "arity_mismatch",
            ParseError::SelfApplication { .. } => "self_application",
            ParseError::KindMismatch { .. } => "kind_mismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DArrow => "`<->`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' | b')' | b',' | b'.' | b'~' | b'&' | b'|' => {
                let tok = match c {
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b',' => Tok::Comma,
                    b'.' => Tok::Dot,
                    b'~' => Tok::Tilde,
                    b'&' => Tok::Amp,
                    _ => Tok::Bar,
                };
                out.push((tok, i));
                i += 1;
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                out.push((Tok::Arrow, i));
                i += 2;
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                out.push((Tok::DArrow, i));
                i += 3;
            }
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    position: i,
                    expected: vec!["a token".into()],
                    found: format!("`{ch}`"),
                });
            }
        }
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    sig: &'a Signature,
    // higher-order binders in scope shadow nothing: they must name declared symbols already
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        ParseError::Syntax {
            position: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().describe(),
        }
    }

    fn expect(&mut self, tok: Tok, label: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[label]))
        }
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        let at = self.offset();
        match self.peek().clone() {
            Tok::Ident(s) if !is_reserved(&s) => {
                self.bump();
                Ok((s, at))
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn formula(&mut self) -> Result<Wff, ParseError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Wff::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Wff, ParseError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Wff::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Wff, ParseError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Wff::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Wff, ParseError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Wff::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Wff, ParseError> {
        match self.peek().clone() {
            Tok::Tilde => {
                self.bump();
                Ok(Wff::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                self.bump();
                let mut binders = vec![self.binder()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    binders.push(self.binder()?);
                }
                self.expect(Tok::Dot, "`.`")?;
                let mut body = self.formula()?;
                for b in binders.into_iter().rev() {
                    body = if kw == "forall" { Wff::forall(b, body) } else { Wff::exists(b, body) };
                }
                Ok(body)
            }
            Tok::Ident(_) => self.atom(),
            _ => Err(self.error(&["`~`", "`(`", "`forall`", "`exists`", "identifier"])),
        }
    }

    fn binder(&mut self) -> Result<Binder, ParseError> {
        let (name, _) = self.ident()?;
        match self.sig.kind_of(&name) {
            None => Ok(Binder::var(name)),
            Some(SymbolKind::Function) => Ok(Binder::function(name)),
            Some(SymbolKind::Predicate) => Ok(Binder::predicate(name)),
            Some(SymbolKind::Constant) => Err(ParseError::KindMismatch {
                symbol: name,
                expected: "bindable symbol".into(),
                declared: "constant".into(),
            }),
        }
    }

    fn arguments(&mut self) -> Result<Vec<Term>, ParseError> {
        if *self.peek() != Tok::LParen {
            return Ok(Vec::new());
        }
        self.bump();
        let mut args = vec![self.term()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`)` or `,`")?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Wff, ParseError> {
        let (name, at) = self.ident()?;
        match self.sig.kind_of(&name) {
            Some(SymbolKind::Predicate) => {
                let args = self.arguments()?;
                Ok(Wff::Atom(name, args))
            }
            Some(kind) => Err(ParseError::KindMismatch {
                symbol: name,
                expected: "predicate".into(),
                declared: kind.to_string(),
            }),
            None => Err(ParseError::UnknownSymbol { name, position: at }),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (name, at) = self.ident()?;
        let has_args = *self.peek() == Tok::LParen;
        match self.sig.kind_of(&name) {
            Some(SymbolKind::Constant) => {
                if has_args {
                    return Err(ParseError::ArityMismatch {
                        symbol: name,
                        expected: 0,
                        found: self.arguments()?.len(),
                    });
                }
                Ok(Term::Const(name))
            }
            Some(SymbolKind::Function) => Ok(Term::App(name, self.arguments()?)),
            Some(SymbolKind::Predicate) => Ok(Term::Pred(name, self.arguments()?)),
            None if has_args => Err(ParseError::UnknownSymbol { name, position: at }),
            None => Ok(Term::Var(name)),
        }
    }
}

/// Parses formula text against a signature, then checks it is well formed.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Wff, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, sig };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input", "connective"]));
    }
    let report = validate_wff(&f, sig);
    // Self-application is the most specific diagnosis, so it wins over arity problems.
    let first = report
        .self_applications()
        .next()
        .or_else(|| report.findings.first());
    match first {
        None => Ok(f),
        Some(Finding::SelfApplication { symbol, path, .. }) => Err(ParseError::SelfApplication {
            symbol: symbol.clone(),
            path: path.clone(),
        }),
        Some(Finding::ArityMismatch { symbol, expected, found, .. }) => {
            Err(ParseError::ArityMismatch {
                symbol: symbol.clone(),
                expected: *expected,
                found: *found,
            })
        }
        Some(Finding::UnknownSymbol { symbol, .. }) => Err(ParseError::UnknownSymbol {
            name: symbol.clone(),
            position: 0,
        }),
        Some(Finding::KindMismatch { symbol, expected, declared, .. }) => {
            Err(ParseError::KindMismatch {
                symbol: symbol.clone(),
                expected: expected.clone(),
                declared: declared.clone(),
            })
        }
    }
}

/// Parses a list of formulas, reporting the index of the first failure.
pub fn parse_all<S: AsRef<str>>(
    texts: &[S],
    sig: &Signature,
) -> Result<Vec<Wff>, (usize, ParseError)> {
    texts
        .iter()
        .enumerate()
        .map(|(i, t)| parse_formula(t.as_ref(), sig).map_err(|e| (i, e)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::ast::BinderKind;

    fn sig() -> Signature {
        Signature::from_json_str(
            r#"{"constants":["c60","a"],
                "functions":{"ftemp":2,"f":1},
                "predicates":{"Active":2,"Gt":2,"A":1,"B":1,"P":1,"A1":1,"Q":0,"R":0}}"#,
        )
        .unwrap()
    }

    #[test]
    fn paper_training_fact() {
        let f = parse_formula("Active(X,T1) & Gt(ftemp(Y,T2), c60)", &sig()).unwrap();
        let expected = Wff::and(
            Wff::atom("Active", vec![Term::var("X"), Term::var("T1")]),
            Wff::atom(
                "Gt",
                vec![Term::app("ftemp", vec![Term::var("Y"), Term::var("T2")]), Term::cst("c60")],
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn negation_binds_tighter_than_implication() {
        let f = parse_formula("~A(x) -> B(x)", &sig()).unwrap();
        assert_eq!(
            f,
            Wff::implies(
                Wff::not(Wff::atom("A", vec![Term::var("x")])),
                Wff::atom("B", vec![Term::var("x")])
            )
        );
    }

    #[test]
    fn direct_self_application_rejected() {
        let err = parse_formula("P(P(x))", &sig()).unwrap_err();
        assert!(matches!(err, ParseError::SelfApplication { ref symbol, .. } if symbol == "P"));
    }

    #[test]
    fn precedence_chain() {
        let f = parse_formula("Q | R & Q -> R <-> Q", &sig()).unwrap();
        let q = || Wff::prop("Q");
        let r = || Wff::prop("R");
        assert_eq!(
            f,
            Wff::iff(Wff::implies(Wff::or(q(), Wff::and(r(), q())), r()), q())
        );
    }

    #[test]
    fn implication_is_right_associative() {
        let f = parse_formula("Q -> R -> Q", &sig()).unwrap();
        assert_eq!(
            f,
            Wff::implies(Wff::prop("Q"), Wff::implies(Wff::prop("R"), Wff::prop("Q")))
        );
    }

    #[test]
    fn quantifier_lists_and_binder_kinds() {
        let f = parse_formula("forall A1, x. A1(x) -> B(x)", &sig()).unwrap();
        match &f {
            Wff::ForAll(b, body) => {
                assert_eq!(b.kind, BinderKind::Predicate);
                assert!(matches!(&**body, Wff::ForAll(x, _) if x.kind == BinderKind::Individual));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn comments_are_skipped() {
        let f = parse_formula("# a comment\nQ # trailing\n& R", &sig()).unwrap();
        assert_eq!(f, Wff::and(Wff::prop("Q"), Wff::prop("R")));
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        match parse_formula("Q & ", &sig()).unwrap_err() {
            ParseError::Syntax { position, expected, .. } => {
                assert_eq!(position, 4);
                assert!(expected.iter().any(|e| e.contains("identifier")));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_formula("Nope(x)", &sig()),
            Err(ParseError::UnknownSymbol { .. })
        ));
        assert!(matches!(
            parse_formula("Gt(a)", &sig()),
            Err(ParseError::ArityMismatch { expected: 2, found: 1, .. })
        ));
    }

    #[test]
    fn predicate_terms_are_distinct_from_atoms() {
        let f = parse_formula("A(f(B(x)))", &sig()).unwrap();
        assert_eq!(
            f,
            Wff::atom(
                "A",
                vec![Term::app("f", vec![Term::pred("B", vec![Term::var("x")])])]
            )
        );
    }

    #[test]
    fn format_then_parse_is_identity() {
        for text in [
            "forall x. P(x) & exists y. B(y)",
            "(forall x. P(x)) & Q",
            "~(Q -> R) <-> (R | Q) & Q",
            "~forall x. ~B(x)",
        ] {
            let f = parse_formula(text, &sig()).unwrap();
            let again = parse_formula(&f.to_string(), &sig()).unwrap();
            assert_eq!(f, again, "{text}");
        }
    }
}
