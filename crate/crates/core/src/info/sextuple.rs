//! Information sextuples and their JSON form.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use super::error::InfoError;
use super::mapping::EnablingMapping;
use super::noise::{compose_noisy, NoiseSpec};
use super::state::StateSet;
use crate::logic::{format_formula, parse_formula, Signature, Wff};
use crate::model::{Interpretation, QuantifierBudget};

/// `(o, T_h, S_o, c, T_m, S_c)` with the enabling mapping from `S_o` to `S_c`.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationSextuple {
    ontology: String,
    occurrence_times: Vec<String>,
    carrier: String,
    reflection_times: Vec<String>,
    enabling: EnablingMapping,
}

impl InformationSextuple {
    pub fn new(
        ontology: impl Into<String>,
        occurrence_times: Vec<String>,
        carrier: impl Into<String>,
        reflection_times: Vec<String>,
        enabling: EnablingMapping,
    ) -> Result<Self, InfoError> {
        let s = InformationSextuple {
            ontology: ontology.into(),
            occurrence_times,
            carrier: carrier.into(),
            reflection_times,
            enabling,
        };
        let checks: [(&'static str, bool); 6] = [
            ("ontology", s.ontology.is_empty()),
            ("occurrence_times", s.occurrence_times.is_empty()),
            ("ontological_state", s.enabling.source().is_empty()),
            ("carrier", s.carrier.is_empty()),
            ("reflection_times", s.reflection_times.is_empty()),
            ("carrier_state", s.enabling.target().is_empty()),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, empty)| *empty) {
            return Err(InfoError::EmptyComponent(name));
        }
        Ok(s)
    }

    /// A state taken as its own carrier through the identity mapping.
    pub fn intrinsic(
        ontology: impl Into<String>,
        times: Vec<String>,
        state: StateSet,
    ) -> Result<Self, InfoError> {
        let ontology = ontology.into();
        InformationSextuple::new(
            ontology.clone(),
            times.clone(),
            ontology,
            times,
            EnablingMapping::identity(state),
        )
    }

    pub fn ontology(&self) -> &str {
        &self.ontology
    }

    pub fn occurrence_times(&self) -> &[String] {
        &self.occurrence_times
    }

    pub fn carrier(&self) -> &str {
        &self.carrier
    }

    pub fn reflection_times(&self) -> &[String] {
        &self.reflection_times
    }

    pub fn ontological_state(&self) -> &StateSet {
        self.enabling.source()
    }

    pub fn carrier_state(&self) -> &StateSet {
        self.enabling.target()
    }

    pub fn enabling(&self) -> &EnablingMapping {
        &self.enabling
    }

    /// The noisy counterpart: same ontology, times and carrier, ontological state with
    /// `noise` applied, and the given carrier state and mapping.
    pub fn with_noise(
        &self,
        noise: &NoiseSpec,
        carrier_state: StateSet,
        pairs: &[(Wff, Wff)],
        budget: &QuantifierBudget,
    ) -> Result<Self, InfoError> {
        let source = compose_noisy(self.ontological_state(), noise, budget)?;
        let enabling = EnablingMapping::new(source, carrier_state, pairs, None)?;
        InformationSextuple::new(
            self.ontology.clone(),
            self.occurrence_times.clone(),
            self.carrier.clone(),
            self.reflection_times.clone(),
            enabling,
        )
    }

    pub fn to_json_value(&self) -> Value {
        let pairs: Vec<Value> = self
            .enabling
            .pairs()
            .into_iter()
            .map(|(a, b)| json!([format_formula(a), format_formula(b)]))
            .collect();
        json!({
            "ontology": self.ontology,
            "occurrence_times": self.occurrence_times,
            "ontological_state": state_json(self.ontological_state()),
            "carrier": self.carrier,
            "reflection_times": self.reflection_times,
            "carrier_state": state_json(self.carrier_state()),
            "mapping": pairs,
        })
    }
}

/// A state set as label, objects, times and formula texts.
pub fn state_json(s: &StateSet) -> Value {
    json!({
        "label": s.label(),
        "objects": s.objects(),
        "times": s.times(),
        "formulas": s.formula_texts(),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    label: String,
    #[serde(default)]
    objects: Vec<String>,
    #[serde(default)]
    times: Vec<String>,
    formulas: Vec<String>,
    #[serde(default)]
    signature: Option<Value>,
    #[serde(default)]
    interpretation: Option<Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoise {
    #[serde(default)]
    loss: Vec<String>,
    #[serde(default)]
    superposed: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoisy {
    carrier_state: RawState,
    mapping: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSextuple {
    #[serde(default)]
    schema: Option<String>,
    #[serde(default)]
    signature: Option<Value>,
    ontology: String,
    occurrence_times: Vec<String>,
    ontological_state: RawState,
    carrier: String,
    reflection_times: Vec<String>,
    carrier_state: RawState,
    mapping: Vec<(String, String)>,
    #[serde(default)]
    provenance: Option<String>,
    #[serde(default)]
    noise: Option<RawNoise>,
    #[serde(default)]
    noisy: Option<RawNoisy>,
}

/// A sextuple file: the sextuple itself and, when the file describes a noisy channel, the
/// noise and the resulting noisy sextuple.
#[derive(Debug, Clone)]
pub struct SextupleDocument {
    pub sextuple: InformationSextuple,
    pub noise: Option<NoiseSpec>,
    pub noisy: Option<InformationSextuple>,
}

pub const SEXTUPLE_SCHEMA: &str = "mltmf.sextuple/1";

fn read(path: &Path) -> Result<String, InfoError> {
    std::fs::read_to_string(path).map_err(|e| InfoError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads an inline JSON object, or a JSON file when the value is a path string.
fn inline_or_file(v: &Value, base: &Path) -> Result<Value, InfoError> {
    match v {
        Value::String(p) => {
            let path: PathBuf = base.join(p);
            serde_json::from_str(&read(&path)?).map_err(|e| InfoError::Json(format!("{}: {e}", path.display())))
        }
        other => Ok(other.clone()),
    }
}

fn signature_of(v: Option<&Value>, base: &Path, fallback: Option<&Signature>) -> Result<Signature, InfoError> {
    match (v, fallback) {
        (Some(v), _) => Ok(Signature::from_json_value(&inline_or_file(v, base)?)?),
        (None, Some(s)) => Ok(s.clone()),
        (None, None) => Err(InfoError::Json("no signature given".into())),
    }
}

fn parse_list(texts: &[String], sig: &Signature, state: &str) -> Result<Vec<Wff>, InfoError> {
    texts
        .iter()
        .enumerate()
        .map(|(index, t)| {
            parse_formula(t, sig).map_err(|e| InfoError::Parse {
                state: state.to_string(),
                index,
                message: e.to_string(),
            })
        })
        .collect()
}

fn load_state(
    raw: &RawState,
    base: &Path,
    default_sig: Option<&Signature>,
    budget: &QuantifierBudget,
) -> Result<StateSet, InfoError> {
    let sig = signature_of(raw.signature.as_ref(), base, default_sig)?;
    let formulas = parse_list(&raw.formulas, &sig, &raw.label)?;
    match &raw.interpretation {
        Some(v) => {
            let interp = Interpretation::from_json_value(&inline_or_file(v, base)?, &sig)?;
            StateSet::new(
                raw.label.clone(),
                raw.objects.clone(),
                raw.times.clone(),
                formulas,
                interp,
                budget,
            )
        }
        None => StateSet::realize(
            raw.label.clone(),
            raw.objects.clone(),
            raw.times.clone(),
            formulas,
            &sig,
            budget,
        ),
    }
}

/// Reads a stand-alone state set object (same shape as the states inside a sextuple file).
pub fn state_from_json_value(
    v: &Value,
    base: &Path,
    default_sig: Option<&Signature>,
    budget: &QuantifierBudget,
) -> Result<StateSet, InfoError> {
    let raw: RawState = serde_json::from_value(v.clone()).map_err(|e| InfoError::Json(e.to_string()))?;
    load_state(&raw, base, default_sig, budget)
}

fn parse_pairs(
    raw: &[(String, String)],
    source: &StateSet,
    target: &StateSet,
) -> Result<Vec<(Wff, Wff)>, InfoError> {
    raw.iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let from = parse_formula(a, source.signature()).map_err(|e| InfoError::Parse {
                state: format!("mapping[{i}]"),
                index: 0,
                message: e.to_string(),
            })?;
            let to = parse_formula(b, target.signature()).map_err(|e| InfoError::Parse {
                state: format!("mapping[{i}]"),
                index: 1,
                message: e.to_string(),
            })?;
            Ok((from, to))
        })
        .collect()
}

impl SextupleDocument {
    /// `base` resolves relative signature and interpretation paths.
    pub fn from_json_value(v: &Value, base: &Path, budget: &QuantifierBudget) -> Result<Self, InfoError> {
        let raw: RawSextuple =
            serde_json::from_value(v.clone()).map_err(|e| InfoError::Json(e.to_string()))?;
        if let Some(schema) = &raw.schema {
            if schema != SEXTUPLE_SCHEMA {
                return Err(InfoError::Json(format!("unsupported schema `{schema}`")));
            }
        }
        let shared = match &raw.signature {
            Some(v) => Some(signature_of(Some(v), base, None)?),
            None => None,
        };
        let source = load_state(&raw.ontological_state, base, shared.as_ref(), budget)?;
        let target = load_state(&raw.carrier_state, base, shared.as_ref(), budget)?;
        let pairs = parse_pairs(&raw.mapping, &source, &target)?;
        let enabling = EnablingMapping::new(source, target, &pairs, raw.provenance.clone())?;
        let sextuple = InformationSextuple::new(
            raw.ontology,
            raw.occurrence_times,
            raw.carrier,
            raw.reflection_times,
            enabling,
        )?;
        let noise = match &raw.noise {
            Some(n) => {
                let sig = sextuple.ontological_state().signature();
                Some(NoiseSpec {
                    loss: parse_list(&n.loss, sig, "noise.loss")?,
                    superposed: parse_list(&n.superposed, sig, "noise.superposed")?,
                })
            }
            None => None,
        };
        let noisy = match (&raw.noisy, &noise) {
            (Some(n), Some(spec)) => {
                let carrier = load_state(&n.carrier_state, base, shared.as_ref(), budget)?;
                let noisy_source = compose_noisy(sextuple.ontological_state(), spec, budget)?;
                let pairs = parse_pairs(&n.mapping, &noisy_source, &carrier)?;
                Some(sextuple.with_noise(spec, carrier, &pairs, budget)?)
            }
            (Some(_), None) => return Err(InfoError::Json("`noisy` needs `noise`".into())),
            _ => None,
        };
        Ok(SextupleDocument { sextuple, noise, noisy })
    }

    pub fn load(path: &Path, budget: &QuantifierBudget) -> Result<Self, InfoError> {
        let v: Value = serde_json::from_str(&read(path)?)
            .map_err(|e| InfoError::Json(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        SextupleDocument::from_json_value(&v, base, budget)
    }
}
