//! Reading input files and mapping library errors onto statuses.

use std::fmt::Display;
use std::path::{Path, PathBuf};

use mltmf_core::automaton::AutomatonError;
use mltmf_core::bound::BoundError;
use mltmf_core::ethics::EthicsError;
use mltmf_core::info::{state_from_json_value, InfoError, StateSet};
use mltmf_core::learn::{query_formula, value_to_rational, LearnError, ToyBatch, ToyModelState};
use mltmf_core::logic::SignatureError;
use mltmf_core::{parse_formula, ModelError, ParseError, QuantifierBudget, Signature, Wff};
use serde_json::Value;

use crate::report::Status;

#[derive(Debug, Clone)]
pub struct CliError {
    pub status: Status,
    pub code: String,
    pub message: String,
}

impl CliError {
    pub fn input(code: &str, message: impl Display) -> Self {
        CliError { status: Status::Error, code: code.to_string(), message: message.to_string() }
    }

    fn budget(message: impl Display) -> Self {
        CliError { status: Status::Budget, code: "BUDGET_EXCEEDED".into(), message: message.to_string() }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::input(&e.code().to_uppercase(), &e)
    }
}

impl From<SignatureError> for CliError {
    fn from(e: SignatureError) -> Self {
        CliError::input("BAD_SIGNATURE", e)
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        if e.is_budget() {
            CliError::budget(e)
        } else {
            CliError::input("MODEL_ERROR", e)
        }
    }
}

impl From<InfoError> for CliError {
    fn from(e: InfoError) -> Self {
        match e {
            InfoError::Rule(l) => l.into(),
            InfoError::Io { .. } => CliError::input("UNREADABLE_INPUT", e),
            e if e.is_budget() => CliError::budget(e),
            e => CliError::input("BAD_INFORMATION", e),
        }
    }
}

impl From<LearnError> for CliError {
    fn from(e: LearnError) -> Self {
        match e {
            LearnError::Info(i) => (*i).into(),
            e if e.is_budget() => CliError::budget(e),
            LearnError::UnknownRule(_) => CliError::input("UNKNOWN_RULE", e),
            e => CliError::input("BAD_STATE", e),
        }
    }
}

impl From<AutomatonError> for CliError {
    fn from(e: AutomatonError) -> Self {
        match e {
            AutomatonError::Model(m) => m.into(),
            AutomatonError::Info(i) => (*i).into(),
            AutomatonError::WordTooLong { .. } => CliError::input("WORD_TOO_LONG", e),
            e => CliError::input("BAD_AUTOMATON", e),
        }
    }
}

impl From<EthicsError> for CliError {
    fn from(e: EthicsError) -> Self {
        match e {
            EthicsError::Model(m) => m.into(),
            EthicsError::Parse(p) => p.into(),
            EthicsError::TooLargeForExact { .. } => CliError::budget(e),
            e => CliError::input("BAD_ETHICS_INPUT", e),
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        let code = match e {
            BoundError::SupportMismatch(_) => "SUPPORT_MISMATCH",
            BoundError::InfiniteDivergence(_) => "INFINITE_DIVERGENCE",
            BoundError::BadDistribution(_) => "BAD_DISTRIBUTION",
            BoundError::NegativeRadicand(_) => "NEGATIVE_RADICAND",
        };
        CliError::input(code, e)
    }
}

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input("UNREADABLE_INPUT", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input("MALFORMED_JSON", format!("{}: {e}", path.display())))
}

fn base_of(path: &Path) -> &Path {
    path.parent().unwrap_or(Path::new("."))
}

/// A signature given inline or as a path relative to `base`.
fn signature_value(v: &Value, base: &Path) -> Result<Signature, CliError> {
    match v {
        Value::String(p) => load_signature(&base.join(p)),
        other => Ok(Signature::from_json_value(other)?),
    }
}

pub fn load_signature(path: &Path) -> Result<Signature, CliError> {
    Ok(Signature::from_json_value(&read_json(path)?)?)
}

/// Named formula texts and the signature they are read against, not yet parsed.
pub struct FormulaSource {
    pub signature: Signature,
    pub items: Vec<(String, String)>,
}

impl FormulaSource {
    /// `{"signature": {...} | "path", "formulas": ["text" | {"name", "formula"}]}`, optionally
    /// extended by `--sig` and formulas from the command line.
    pub fn gather(file: Option<&PathBuf>, sig: Option<&PathBuf>, texts: &[String]) -> Result<Self, CliError> {
        let mut signature = match sig {
            Some(p) => Some(load_signature(p)?),
            None => None,
        };
        let mut items = Vec::new();
        if let Some(path) = file {
            let v = read_json(path)?;
            if let Some(s) = v.get("signature") {
                let s = signature_value(s, base_of(path))?;
                signature = Some(match signature {
                    Some(given) => given.merge(&s)?,
                    None => s,
                });
            }
            let list = v
                .get("formulas")
                .and_then(Value::as_array)
                .ok_or_else(|| CliError::input("MALFORMED_INPUT", format!("{}: no `formulas` list", path.display())))?;
            for item in list {
                items.push(match item {
                    Value::String(t) => (t.clone(), t.clone()),
                    Value::Object(o) => {
                        let text = o.get("formula").and_then(Value::as_str);
                        let name = o.get("name").and_then(Value::as_str);
                        match (name, text) {
                            (Some(n), Some(t)) => (n.to_string(), t.to_string()),
                            _ => return Err(CliError::input("MALFORMED_INPUT", "formula entries need `name` and `formula`")),
                        }
                    }
                    _ => return Err(CliError::input("MALFORMED_INPUT", "formula entries must be text or objects")),
                });
            }
        }
        items.extend(texts.iter().map(|t| (t.clone(), t.clone())));
        let signature =
            signature.ok_or_else(|| CliError::input("MISSING_SIGNATURE", "give --sig or a formula file with a signature"))?;
        Ok(FormulaSource { signature, items })
    }

    pub fn names(&self) -> Vec<String> {
        self.items.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn parse(&self) -> Result<Vec<Wff>, CliError> {
        self.items
            .iter()
            .map(|(name, t)| {
                parse_formula(t, &self.signature).map_err(|e| {
                    let mut err = CliError::from(e);
                    err.message = format!("{name}: {}", err.message);
                    err
                })
            })
            .collect()
    }
}

/// A state file, or a toy model, batch or query wrapped as
/// `{"label", "times", "toy_model" | "toy_batch" | "toy_query"}`.
pub fn load_state(path: &Path, budget: &QuantifierBudget) -> Result<StateSet, CliError> {
    let mut v = read_json(path)?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| CliError::input("MALFORMED_INPUT", format!("{}: expected an object", path.display())))?;
    let toy = if let Some(m) = obj.remove("toy_model") {
        Some(ToyModelState::from_json_value(&m)?.to_formula())
    } else if let Some(b) = obj.remove("toy_batch") {
        Some(ToyBatch::from_json_value(&b)?.to_formula())
    } else if let Some(q) = obj.remove("toy_query") {
        let values = q
            .as_array()
            .and_then(|a| a.iter().map(value_to_rational).collect::<Option<Vec<_>>>())
            .filter(|x| !x.is_empty())
            .ok_or_else(|| CliError::input("MALFORMED_INPUT", "`toy_query` must be a non-empty list of numbers"))?;
        Some(query_formula(&values))
    } else {
        None
    };
    match toy {
        None => Ok(state_from_json_value(&v, base_of(path), None, budget)?),
        Some(f) => {
            let strings = |key: &str| -> Vec<String> {
                v.get(key)
                    .and_then(Value::as_array)
                    .map(|a| a.iter().filter_map(|s| s.as_str().map(str::to_string)).collect())
                    .unwrap_or_default()
            };
            let label = v.get("label").and_then(Value::as_str).unwrap_or("S").to_string();
            let sig = Signature::infer([&f])?;
            Ok(StateSet::realize(label, strings("objects"), strings("times"), vec![f], &sig, budget)?)
        }
    }
}
