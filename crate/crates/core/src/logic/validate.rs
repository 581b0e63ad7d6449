use std::fmt;

use serde::Serialize;

use super::ast::{BinderKind, Term, Wff};
use super::signature::{Signature, SymbolKind};

/// One problem found in a formula. Paths use `$` for the root, `.lhs`/`.rhs`/`.body`/`.arg`
/// for formula children and `.args[i]` for term arguments.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Finding {
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
        path: String,
    },
    /// `symbol` occurs at `path`, somewhere beneath its own application at `outer_path`.
    SelfApplication {
        symbol: String,
        outer_path: String,
        path: String,
    },
    UnknownSymbol {
        symbol: String,
        path: String,
    },
    KindMismatch {
        symbol: String,
        expected: String,
        declared: String,
        path: String,
    },
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Finding::ArityMismatch { symbol, expected, found, path } => write!(
                f,
                "arity mismatch at {path}: `{symbol}` expects {expected} argument(s), got {found}"
            ),
            Finding::SelfApplication { symbol, outer_path, path } => write!(
                f,
                "self-application: `{symbol}` at {path} occurs beneath its own application at {outer_path}"
            ),
            Finding::UnknownSymbol { symbol, path } => {
                write!(f, "unknown symbol `{symbol}` at {path}")
            }
            Finding::KindMismatch { symbol, expected, declared, path } => write!(
                f,
                "`{symbol}` at {path} is used as a {expected} but declared as a {declared}"
            ),
        }
    }
}

/// Everything wrong with a formula relative to a signature. Empty iff the formula is well formed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn self_applications(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| matches!(f, Finding::SelfApplication { .. }))
    }
}

struct Validator<'a> {
    sig: &'a Signature,
    findings: Vec<Finding>,
}

fn kind_name(kind: SymbolKind) -> String {
    kind.to_string()
}

impl Validator<'_> {
    fn check_application(
        &mut self,
        name: &str,
        expected_kind: SymbolKind,
        found: usize,
        path: &str,
    ) {
        match self.sig.kind_of(name) {
            None => self.findings.push(Finding::UnknownSymbol {
                symbol: name.to_string(),
                path: path.to_string(),
            }),
            Some(kind) if kind != expected_kind => self.findings.push(Finding::KindMismatch {
                symbol: name.to_string(),
                expected: kind_name(expected_kind),
                declared: kind_name(kind),
                path: path.to_string(),
            }),
            Some(_) => {
                let expected = self.sig.arity(name).unwrap_or(0);
                if expected != found {
                    self.findings.push(Finding::ArityMismatch {
                        symbol: name.to_string(),
                        expected,
                        found,
                        path: path.to_string(),
                    });
                }
            }
        }
    }

    /// Reports the first place `symbol` occurs inside `args`.
    fn check_self(&mut self, symbol: &str, args: &[Term], outer_path: &str) {
        for (i, arg) in args.iter().enumerate() {
            let path = format!("{outer_path}.args[{i}]");
            if let Some(hit) = find_symbol(arg, symbol, &path) {
                self.findings.push(Finding::SelfApplication {
                    symbol: symbol.to_string(),
                    outer_path: outer_path.to_string(),
                    path: hit,
                });
                return;
            }
        }
    }

    fn term(&mut self, t: &Term, path: &str) {
        match t {
            Term::Var(name) => {
                if let Some(kind) = self.sig.kind_of(name) {
                    self.findings.push(Finding::KindMismatch {
                        symbol: name.clone(),
                        expected: "variable".into(),
                        declared: kind_name(kind),
                        path: path.to_string(),
                    });
                }
            }
            Term::Const(name) => match self.sig.kind_of(name) {
                Some(SymbolKind::Constant) => {}
                None => self.findings.push(Finding::UnknownSymbol {
                    symbol: name.clone(),
                    path: path.to_string(),
                }),
                Some(kind) => self.findings.push(Finding::KindMismatch {
                    symbol: name.clone(),
                    expected: "constant".into(),
                    declared: kind_name(kind),
                    path: path.to_string(),
                }),
            },
            Term::App(name, args) | Term::Pred(name, args) => {
                let kind = if matches!(t, Term::App(..)) {
                    SymbolKind::Function
                } else {
                    SymbolKind::Predicate
                };
                self.check_application(name, kind, args.len(), path);
                self.check_self(name, args, path);
                for (i, a) in args.iter().enumerate() {
                    self.term(a, &format!("{path}.args[{i}]"));
                }
            }
        }
    }

    fn wff(&mut self, w: &Wff, path: &str) {
        match w {
            Wff::Atom(name, args) => {
                self.check_application(name, SymbolKind::Predicate, args.len(), path);
                self.check_self(name, args, path);
                for (i, a) in args.iter().enumerate() {
                    self.term(a, &format!("{path}.args[{i}]"));
                }
            }
            Wff::Not(a) => self.wff(a, &format!("{path}.arg")),
            Wff::ForAll(b, body) | Wff::Exists(b, body) => {
                let declared = self.sig.kind_of(&b.name);
                let ok = matches!(
                    (b.kind, declared),
                    (BinderKind::Individual, None)
                        | (BinderKind::Function, Some(SymbolKind::Function))
                        | (BinderKind::Predicate, Some(SymbolKind::Predicate))
                );
                if !ok {
                    let expected = match b.kind {
                        BinderKind::Individual => "variable",
                        BinderKind::Function => "function",
                        BinderKind::Predicate => "predicate",
                    };
                    match declared {
                        Some(kind) => self.findings.push(Finding::KindMismatch {
                            symbol: b.name.clone(),
                            expected: expected.into(),
                            declared: kind_name(kind),
                            path: path.to_string(),
                        }),
                        None => self.findings.push(Finding::UnknownSymbol {
                            symbol: b.name.clone(),
                            path: path.to_string(),
                        }),
                    }
                }
                self.wff(body, &format!("{path}.body"));
            }
            Wff::Implies(a, b) | Wff::And(a, b) | Wff::Or(a, b) | Wff::Iff(a, b) => {
                self.wff(a, &format!("{path}.lhs"));
                self.wff(b, &format!("{path}.rhs"));
            }
        }
    }
}

fn find_symbol(t: &Term, symbol: &str, path: &str) -> Option<String> {
    match t {
        Term::Var(name) | Term::Const(name) => (name == symbol).then(|| path.to_string()),
        Term::App(name, args) | Term::Pred(name, args) => {
            if name == symbol {
                return Some(path.to_string());
            }
            args.iter()
                .enumerate()
                .find_map(|(i, a)| find_symbol(a, symbol, &format!("{path}.args[{i}]")))
        }
    }
}

/// Checks arities, symbol classes and the transitive ban on self-application.
pub fn validate_wff(w: &Wff, sig: &Signature) -> ValidationReport {
    let mut v = Validator { sig, findings: Vec::new() };
    v.wff(w, "$");
    ValidationReport { findings: v.findings }
}
