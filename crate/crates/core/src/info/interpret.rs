//! Whether a model is interpretable: its own, its input's and its output's information are
//! all recoverable, and it turns the input into the output.

use serde::Serialize;

use super::error::InfoError;
use super::mapping::check_enabling_map;
use super::sextuple::InformationSextuple;
use crate::learn::{apply_process, can_process, ProcessRule};
use crate::logic::format_formula;
use crate::model::QuantifierBudget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Reason {
    IuNotRecoverable,
    IqNotRecoverable,
    IrNotRecoverable,
    NotProcessable,
    OutputMismatch,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::IuNotRecoverable => "IU_NOT_RECOVERABLE",
            Reason::IqNotRecoverable => "IQ_NOT_RECOVERABLE",
            Reason::IrNotRecoverable => "IR_NOT_RECOVERABLE",
            Reason::NotProcessable => "NOT_PROCESSABLE",
            Reason::OutputMismatch => "OUTPUT_MISMATCH",
        }
    }
}

/// One side of the explanation: the ontological formulas and, per carrier formula, the
/// ontological formula it recovers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Explanation {
    pub formulas: Vec<String>,
    pub recovered: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExplanationTriple {
    pub e_u: Explanation,
    pub e_q: Explanation,
    pub e_r: Explanation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum InterpretabilityVerdict {
    Interpretable { explanation: ExplanationTriple },
    NotInterpretable { reasons: Vec<Reason> },
}

impl InterpretabilityVerdict {
    pub fn is_interpretable(&self) -> bool {
        matches!(self, InterpretabilityVerdict::Interpretable { .. })
    }

    pub fn reasons(&self) -> &[Reason] {
        match self {
            InterpretabilityVerdict::Interpretable { .. } => &[],
            InterpretabilityVerdict::NotInterpretable { reasons } => reasons,
        }
    }
}

fn recoverable(s: &InformationSextuple) -> bool {
    check_enabling_map(s.enabling()).is_ok_and(|r| r.recoverable)
}

/// Only called on recoverable sextuples, so every carrier formula has one preimage.
fn explain(s: &InformationSextuple) -> Explanation {
    let mut recovered: Vec<(String, String)> = s
        .enabling()
        .pairs()
        .into_iter()
        .map(|(o, c)| (format_formula(c), format_formula(o)))
        .collect();
    let order = s.carrier_state().formula_texts();
    recovered.sort_by_key(|(c, _)| order.iter().position(|x| x == c));
    Explanation { formulas: s.ontological_state().formula_texts(), recovered }
}

pub fn check_interpretability(
    iu: &InformationSextuple,
    iq: &InformationSextuple,
    ir: &InformationSextuple,
    rule: &dyn ProcessRule,
    budget: &QuantifierBudget,
) -> Result<InterpretabilityVerdict, InfoError> {
    iu.ontological_state()
        .signature()
        .merge(iq.ontological_state().signature())
        .and_then(|s| s.merge(ir.ontological_state().signature()))
        .map_err(|e| InfoError::SignatureMismatch(e.to_string()))?;
    let mut reasons = Vec::new();
    for (s, r) in [
        (iu, Reason::IuNotRecoverable),
        (iq, Reason::IqNotRecoverable),
        (ir, Reason::IrNotRecoverable),
    ] {
        if !recoverable(s) {
            reasons.push(r);
        }
    }
    let (su, sq) = (iu.ontological_state(), iq.ontological_state());
    if !can_process(rule, su, sq, budget)? {
        reasons.push(Reason::NotProcessable);
    } else if !apply_process(rule, su, sq, budget)?.same_formulas(ir.ontological_state()) {
        reasons.push(Reason::OutputMismatch);
    }
    if !reasons.is_empty() {
        return Ok(InterpretabilityVerdict::NotInterpretable { reasons });
    }
    Ok(InterpretabilityVerdict::Interpretable {
        explanation: ExplanationTriple { e_u: explain(iu), e_q: explain(iq), e_r: explain(ir) },
    })
}
