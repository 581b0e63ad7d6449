//! Learn and process rules over state sets.

mod fact_union;
mod formula;
pub mod toy;

use serde::Serialize;
use thiserror::Error;

use crate::info::{check_enabling_map, InfoError, InformationSextuple, StateSet};
use crate::logic::{Signature, Wff};
use crate::model::{ModelError, QuantifierBudget};

pub use fact_union::{unknown_formula, FactQuery, FactUnion};
pub use formula::{
    is_rule_formula, learn_function, learnable_predicate, match_rule_formula, rule_formula, state_constant,
    RuleInstance,
};
pub use toy::{
    gradient_step, output_formula, parse_rational_text, query_formula, query_from_formulas, rational_constant,
    rational_from_f64, value_to_rational, Activation, Rational, ToyBatch, ToyGradient, ToyLearnability,
    ToyModelState, ToyPredict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LearnError {
    #[error("`{learner}` cannot learn from `{teacher}` under rule `{rule}`")]
    NotLearnable {
        rule: String,
        learner: String,
        teacher: String,
    },
    #[error("`{state}` cannot process `{query}` under rule `{rule}`")]
    NotProcessable {
        rule: String,
        state: String,
        query: String,
    },
    #[error("rule `{0}` produced an inconsistent state")]
    ResultInconsistent(String),
    #[error("time `{latest}` of the inputs comes after time `{earliest}` of the result")]
    TimeOrder { latest: String, earliest: String },
    #[error("time `{0}` is not in the declared order")]
    UnknownTime(String),
    #[error("{0}")]
    BadState(String),
    #[error("no rule named `{0}`")]
    UnknownRule(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Info(Box<InfoError>),
}

impl From<InfoError> for LearnError {
    fn from(e: InfoError) -> Self {
        LearnError::Info(Box::new(e))
    }
}

impl LearnError {
    pub fn is_budget(&self) -> bool {
        match self {
            LearnError::Model(m) => m.is_budget(),
            LearnError::Info(i) => i.is_budget(),
            _ => false,
        }
    }
}

/// `Learnable(Φx, Φy)` and `f_learn(Φx, Φy)` at the level of formula sets.
pub trait LearnRule {
    fn name(&self) -> &str;
    fn learnable(&self, x: &[Wff], y: &[Wff], budget: &QuantifierBudget) -> Result<bool, LearnError>;
    fn learn(&self, x: &[Wff], y: &[Wff], budget: &QuantifierBudget) -> Result<Vec<Wff>, LearnError>;
}

/// `Processable(Φu, Φq)` and `f_process(Φu, Φq)` at the level of formula sets.
pub trait ProcessRule {
    fn name(&self) -> &str;
    fn processable(&self, u: &[Wff], q: &[Wff], budget: &QuantifierBudget) -> Result<bool, LearnError>;
    fn process(&self, u: &[Wff], q: &[Wff], budget: &QuantifierBudget) -> Result<Vec<Wff>, LearnError>;
}

pub fn learn_rule(name: &str) -> Result<Box<dyn LearnRule>, LearnError> {
    match name {
        "fact_union" => Ok(Box::new(FactUnion)),
        "toy_gradient" => Ok(Box::new(ToyGradient)),
        _ => Err(LearnError::UnknownRule(name.to_string())),
    }
}

pub fn process_rule(name: &str) -> Result<Box<dyn ProcessRule>, LearnError> {
    match name {
        "fact_query" => Ok(Box::new(FactQuery)),
        "toy_predict" => Ok(Box::new(ToyPredict)),
        _ => Err(LearnError::UnknownRule(name.to_string())),
    }
}

/// How time labels compare.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum TimeOrder {
    #[default]
    Lexicographic,
    /// Earliest first; labels outside the list are errors.
    Declared(Vec<String>),
}

impl TimeOrder {
    fn rank(&self, t: &str) -> Result<(usize, String), LearnError> {
        match self {
            TimeOrder::Lexicographic => Ok((0, t.to_string())),
            TimeOrder::Declared(order) => order
                .iter()
                .position(|x| x == t)
                .map(|i| (i, String::new()))
                .ok_or_else(|| LearnError::UnknownTime(t.to_string())),
        }
    }

    pub fn latest<'a>(&self, times: impl IntoIterator<Item = &'a String>) -> Result<Option<&'a String>, LearnError> {
        let mut best: Option<(&String, (usize, String))> = None;
        for t in times {
            let r = self.rank(t)?;
            if best.as_ref().is_none_or(|(_, b)| r > *b) {
                best = Some((t, r));
            }
        }
        Ok(best.map(|(t, _)| t))
    }

    pub fn earliest<'a>(&self, times: impl IntoIterator<Item = &'a String>) -> Result<Option<&'a String>, LearnError> {
        let mut best: Option<(&String, (usize, String))> = None;
        for t in times {
            let r = self.rank(t)?;
            if best.as_ref().is_none_or(|(_, b)| r < *b) {
                best = Some((t, r));
            }
        }
        Ok(best.map(|(t, _)| t))
    }

    /// `sup(before) <= inf(after)`; vacuous when either side has no times.
    pub fn check(&self, before: &[String], after: &[String]) -> Result<(), LearnError> {
        if let (Some(latest), Some(earliest)) = (self.latest(before)?, self.earliest(after)?) {
            if self.rank(latest)? > self.rank(earliest)? {
                return Err(LearnError::TimeOrder { latest: latest.clone(), earliest: earliest.clone() });
            }
        }
        Ok(())
    }
}

/// `S_1`, `S_2`, ... : the label a learned state gets by default.
pub fn next_label(label: &str) -> String {
    if let Some((stem, n)) = label.rsplit_once('_') {
        if let Ok(k) = n.parse::<u64>() {
            return format!("{stem}_{}", k + 1);
        }
    }
    format!("{label}_1")
}

/// Label and times of a learned state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LearnTarget {
    pub label: String,
    pub times: Vec<String>,
}

pub fn can_learn(
    rule: &dyn LearnRule,
    sx: &StateSet,
    sy: &StateSet,
    budget: &QuantifierBudget,
) -> Result<bool, LearnError> {
    rule.learnable(sx.formulas(), sy.formulas(), budget)
}

fn union_strings(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    out.extend(b.iter().filter(|s| !a.contains(s)).cloned());
    out
}

fn realize_result(
    label: String,
    objects: Vec<String>,
    times: Vec<String>,
    formulas: Vec<Wff>,
    base: &[&Signature],
    rule: &str,
    budget: &QuantifierBudget,
) -> Result<StateSet, LearnError> {
    let mut sig = Signature::infer(&formulas).map_err(InfoError::from)?;
    for s in base {
        sig = sig.merge(s).map_err(InfoError::from)?;
    }
    match StateSet::realize(label, objects, times, formulas, &sig, budget) {
        Err(InfoError::Inconsistent(_)) => Err(LearnError::ResultInconsistent(rule.to_string())),
        other => Ok(other?),
    }
}

/// Learns with the default target: label from [`next_label`], times the latest input time.
pub fn apply_learn(
    rule: &dyn LearnRule,
    sx: &StateSet,
    sy: &StateSet,
    budget: &QuantifierBudget,
) -> Result<StateSet, LearnError> {
    let order = TimeOrder::Lexicographic;
    let inputs = union_strings(sx.times(), sy.times());
    let times = order.latest(&inputs)?.cloned().into_iter().collect();
    let target = LearnTarget { label: next_label(sx.label()), times };
    apply_learn_with(rule, sx, sy, &target, &order, budget)
}

/// `f_learn(Φx, Φy)` plus the rule formula adapted to the new state, realized and checked.
pub fn apply_learn_with(
    rule: &dyn LearnRule,
    sx: &StateSet,
    sy: &StateSet,
    target: &LearnTarget,
    order: &TimeOrder,
    budget: &QuantifierBudget,
) -> Result<StateSet, LearnError> {
    order.check(&union_strings(sx.times(), sy.times()), &target.times)?;
    if !can_learn(rule, sx, sy, budget)? {
        return Err(LearnError::NotLearnable {
            rule: rule.name().to_string(),
            learner: sx.label().to_string(),
            teacher: sy.label().to_string(),
        });
    }
    let mut formulas = rule.learn(sx.formulas(), sy.formulas(), budget)?;
    formulas.push(rule_formula(
        rule.name(),
        &state_constant(&target.label),
        &state_constant(sy.label()),
        &state_constant(&next_label(&target.label)),
    ));
    realize_result(
        target.label.clone(),
        union_strings(sx.objects(), sy.objects()),
        target.times.clone(),
        formulas,
        &[sx.signature(), sy.signature()],
        rule.name(),
        budget,
    )
}

/// Whether `after` keeps the learning rule, adapted so that `after` itself is the learner.
pub fn check_inheritance(before: &StateSet, after: &StateSet, rule: &dyn LearnRule) -> bool {
    let me = state_constant(after.label());
    let inherited = after
        .formulas()
        .iter()
        .filter_map(|f| match_rule_formula(f, rule.name()))
        .any(|r| r.learner == me);
    // A rule already present before learning must have pointed at this state as its target.
    let consistent = before
        .formulas()
        .iter()
        .filter_map(|f| match_rule_formula(f, rule.name()))
        .filter(|r| r.learner == state_constant(before.label()))
        .all(|r| r.target == me || after.label() != next_label(before.label()));
    inherited && consistent
}

pub fn can_process(
    rule: &dyn ProcessRule,
    su: &StateSet,
    sq: &StateSet,
    budget: &QuantifierBudget,
) -> Result<bool, LearnError> {
    rule.processable(su.formulas(), sq.formulas(), budget)
}

/// `f_process(Φu, Φq)` as a realized state labelled `<Su>_out`.
pub fn apply_process(
    rule: &dyn ProcessRule,
    su: &StateSet,
    sq: &StateSet,
    budget: &QuantifierBudget,
) -> Result<StateSet, LearnError> {
    if !can_process(rule, su, sq, budget)? {
        return Err(LearnError::NotProcessable {
            rule: rule.name().to_string(),
            state: su.label().to_string(),
            query: sq.label().to_string(),
        });
    }
    let formulas = rule.process(su.formulas(), sq.formulas(), budget)?;
    realize_result(
        format!("{}_out", su.label()),
        sq.objects().to_vec(),
        sq.times().to_vec(),
        formulas,
        &[],
        rule.name(),
        budget,
    )
}

/// Learning carried out on both the ontological and the carrier side of two sextuples.
#[derive(Debug, Clone)]
pub struct LearningRealization {
    pub original_recoverable: bool,
    pub training_recoverable: bool,
    pub ontological: Option<StateSet>,
    pub carrier: Option<StateSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LearningSummary {
    pub original_recoverable: bool,
    pub training_recoverable: bool,
    pub ontological_learned: bool,
    pub carrier_learned: bool,
    pub realized: bool,
}

impl LearningRealization {
    /// Both inputs recoverable and both sides learned.
    pub fn realized(&self) -> bool {
        self.original_recoverable && self.training_recoverable && self.ontological.is_some() && self.carrier.is_some()
    }

    pub fn summary(&self) -> LearningSummary {
        LearningSummary {
            original_recoverable: self.original_recoverable,
            training_recoverable: self.training_recoverable,
            ontological_learned: self.ontological.is_some(),
            carrier_learned: self.carrier.is_some(),
            realized: self.realized(),
        }
    }
}

fn learn_if_possible(
    rule: &dyn LearnRule,
    x: &StateSet,
    y: &StateSet,
    budget: &QuantifierBudget,
) -> Result<Option<StateSet>, LearnError> {
    match apply_learn(rule, x, y, budget) {
        Ok(s) => Ok(Some(s)),
        Err(LearnError::NotLearnable { .. }) | Err(LearnError::TimeOrder { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Runs `rule` on the ontological states of `original` and `training`, and separately on
/// their carrier states.
pub fn realize_learning(
    rule: &dyn LearnRule,
    original: &InformationSextuple,
    training: &InformationSextuple,
    budget: &QuantifierBudget,
) -> Result<LearningRealization, LearnError> {
    let recoverable = |s: &InformationSextuple| check_enabling_map(s.enabling()).is_ok_and(|r| r.recoverable);
    Ok(LearningRealization {
        original_recoverable: recoverable(original),
        training_recoverable: recoverable(training),
        ontological: learn_if_possible(rule, original.ontological_state(), training.ontological_state(), budget)?,
        carrier: learn_if_possible(rule, original.carrier_state(), training.carrier_state(), budget)?,
    })
}
