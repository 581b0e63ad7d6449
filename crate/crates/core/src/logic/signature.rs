use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ast::{Term, Wff};

/// The three declared symbol classes. Anything else is a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Constant,
    Function,
    Predicate,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Constant => "constant",
            SymbolKind::Function => "function",
            SymbolKind::Predicate => "predicate",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{name}` declared as both {first} and {second}")]
    DuplicateName {
        name: String,
        first: SymbolKind,
        second: SymbolKind,
    },
    #[error("function `{0}` must have arity >= 1")]
    ZeroArityFunction(String),
    #[error("`{0}` is not a valid identifier")]
    BadIdentifier(String),
    #[error("`{0}` is a reserved word")]
    Reserved(String),
    #[error("symbol `{name}` declared with conflicting arities {left} and {right}")]
    ArityConflict {
        name: String,
        left: usize,
        right: usize,
    },
    #[error("cannot read signature: {0}")]
    Io(String),
    #[error("malformed signature JSON: {0}")]
    Json(String),
}

/// Declared symbols of a formal system.
///
/// Predicates may have arity zero; those act as propositional letters. Functions need at least
/// one argument (nullary functions are constants).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Signature {
    #[serde(default)]
    constants: BTreeSet<String>,
    #[serde(default)]
    functions: BTreeMap<String, usize>,
    #[serde(default)]
    predicates: BTreeMap<String, usize>,
}

pub(crate) fn is_identifier(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn is_reserved(s: &str) -> bool {
    matches!(s, "forall" | "exists")
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_parts<C, F, P>(constants: C, functions: F, predicates: P) -> Result<Self, SignatureError>
    where
        C: IntoIterator,
        C::Item: Into<String>,
        F: IntoIterator<Item = (String, usize)>,
        P: IntoIterator<Item = (String, usize)>,
    {
        let mut sig = Signature::new();
        for c in constants {
            sig.add_constant(c)?;
        }
        for (name, arity) in functions {
            sig.add_function(name, arity)?;
        }
        for (name, arity) in predicates {
            sig.add_predicate(name, arity)?;
        }
        Ok(sig)
    }

    pub fn from_json_str(text: &str) -> Result<Self, SignatureError> {
        let raw: Signature =
            serde_json::from_str(text).map_err(|e| SignatureError::Json(e.to_string()))?;
        raw.checked()
    }

    pub fn from_json_value(value: &serde_json::Value) -> Result<Self, SignatureError> {
        let raw: Signature = serde_json::from_value(value.clone())
            .map_err(|e| SignatureError::Json(e.to_string()))?;
        raw.checked()
    }

    pub fn load(path: &Path) -> Result<Self, SignatureError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SignatureError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Re-validates a signature that was built without going through the `add_*` methods.
    fn checked(self) -> Result<Self, SignatureError> {
        Signature::from_parts(self.constants, self.functions, self.predicates)
    }

    fn check_name(&self, name: &str, kind: SymbolKind) -> Result<(), SignatureError> {
        if !is_identifier(name) {
            return Err(SignatureError::BadIdentifier(name.to_string()));
        }
        if is_reserved(name) {
            return Err(SignatureError::Reserved(name.to_string()));
        }
        match self.kind_of(name) {
            Some(existing) if existing != kind => Err(SignatureError::DuplicateName {
                name: name.to_string(),
                first: existing,
                second: kind,
            }),
            _ => Ok(()),
        }
    }

    pub fn add_constant(&mut self, name: impl Into<String>) -> Result<(), SignatureError> {
        let name = name.into();
        self.check_name(&name, SymbolKind::Constant)?;
        self.constants.insert(name);
        Ok(())
    }

    pub fn add_function(&mut self, name: impl Into<String>, arity: usize) -> Result<(), SignatureError> {
        let name = name.into();
        if arity == 0 {
            return Err(SignatureError::ZeroArityFunction(name));
        }
        self.check_name(&name, SymbolKind::Function)?;
        if let Some(&old) = self.functions.get(&name) {
            if old != arity {
                return Err(SignatureError::ArityConflict { name, left: old, right: arity });
            }
        }
        self.functions.insert(name, arity);
        Ok(())
    }

    pub fn add_predicate(&mut self, name: impl Into<String>, arity: usize) -> Result<(), SignatureError> {
        let name = name.into();
        self.check_name(&name, SymbolKind::Predicate)?;
        if let Some(&old) = self.predicates.get(&name) {
            if old != arity {
                return Err(SignatureError::ArityConflict { name, left: old, right: arity });
            }
        }
        self.predicates.insert(name, arity);
        Ok(())
    }

    pub fn with_constant(mut self, name: &str) -> Result<Self, SignatureError> {
        self.add_constant(name)?;
        Ok(self)
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Result<Self, SignatureError> {
        self.add_function(name, arity)?;
        Ok(self)
    }

    pub fn with_predicate(mut self, name: &str, arity: usize) -> Result<Self, SignatureError> {
        self.add_predicate(name, arity)?;
        Ok(self)
    }

    pub fn kind_of(&self, name: &str) -> Option<SymbolKind> {
        if self.constants.contains(name) {
            Some(SymbolKind::Constant)
        } else if self.functions.contains_key(name) {
            Some(SymbolKind::Function)
        } else if self.predicates.contains_key(name) {
            Some(SymbolKind::Predicate)
        } else {
            None
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.kind_of(name).is_some()
    }

    pub fn is_constant(&self, name: &str) -> bool {
        self.constants.contains(name)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    /// Arity of a function or predicate symbol.
    pub fn arity(&self, name: &str) -> Option<usize> {
        self.function_arity(name).or_else(|| self.predicate_arity(name))
    }

    pub fn constants(&self) -> impl Iterator<Item = &str> + '_ {
        self.constants.iter().map(String::as_str)
    }

    pub fn functions(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.functions.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.predicates.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn constant_count(&self) -> usize {
        self.constants.len()
    }

    /// Union of two signatures; fails when a name is used inconsistently.
    pub fn merge(&self, other: &Signature) -> Result<Signature, SignatureError> {
        let mut out = self.clone();
        for c in &other.constants {
            out.add_constant(c.clone())?;
        }
        for (f, &a) in &other.functions {
            out.add_function(f.clone(), a)?;
        }
        for (p, &a) in &other.predicates {
            out.add_predicate(p.clone(), a)?;
        }
        Ok(out)
    }

    /// Returns `base` if unused, otherwise `base_1`, `base_2`, ... until a free name turns up.
    pub fn fresh_name(&self, base: &str) -> String {
        if !self.contains(base) {
            return base.to_string();
        }
        (1..)
            .map(|i| format!("{base}_{i}"))
            .find(|candidate| !self.contains(candidate))
            .expect("unbounded search")
    }

    /// The symbols a list of parsed formulas uses, with the classes and arities their syntax
    /// implies. Fails when one name is used two incompatible ways.
    pub fn infer<'w>(formulas: impl IntoIterator<Item = &'w Wff>) -> Result<Signature, SignatureError> {
        fn term(t: &Term, sig: &mut Signature) -> Result<(), SignatureError> {
            match t {
                Term::Var(_) => Ok(()),
                Term::Const(c) => sig.add_constant(c.clone()),
                Term::App(f, args) => {
                    sig.add_function(f.clone(), args.len())?;
                    args.iter().try_for_each(|a| term(a, sig))
                }
                Term::Pred(p, args) => {
                    sig.add_predicate(p.clone(), args.len())?;
                    args.iter().try_for_each(|a| term(a, sig))
                }
            }
        }
        fn wff(w: &Wff, sig: &mut Signature) -> Result<(), SignatureError> {
            match w {
                Wff::Atom(p, args) => {
                    sig.add_predicate(p.clone(), args.len())?;
                    args.iter().try_for_each(|a| term(a, sig))
                }
                _ => w.children().into_iter().try_for_each(|c| wff(c, sig)),
            }
        }
        let mut sig = Signature::new();
        for f in formulas {
            wff(f, &mut sig)?;
        }
        Ok(sig)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("signature serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_are_unique_across_classes() {
        let sig = Signature::new().with_constant("a").unwrap();
        let err = sig.with_predicate("a", 1).unwrap_err();
        assert!(matches!(err, SignatureError::DuplicateName { .. }));
    }

    #[test]
    fn functions_need_positive_arity() {
        assert!(matches!(
            Signature::new().with_function("f", 0),
            Err(SignatureError::ZeroArityFunction(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"constants":["c60"],"functions":{"ftemp":2},"predicates":{"Active":2,"Gt":2}}"#;
        let sig = Signature::from_json_str(text).unwrap();
        assert_eq!(sig.function_arity("ftemp"), Some(2));
        assert_eq!(sig.kind_of("c60"), Some(SymbolKind::Constant));
        let again = Signature::from_json_value(&sig.to_json_value()).unwrap();
        assert_eq!(sig, again);
    }

    #[test]
    fn json_rejects_duplicates() {
        let text = r#"{"constants":["P"],"predicates":{"P":1}}"#;
        assert!(Signature::from_json_str(text).is_err());
    }

    #[test]
    fn fresh_names_skip_collisions() {
        let sig = Signature::new()
            .with_constant("NEc")
            .unwrap()
            .with_constant("NEc_1")
            .unwrap();
        assert_eq!(sig.fresh_name("NEc"), "NEc_2");
        assert_eq!(sig.fresh_name("Other"), "Other");
    }
}
