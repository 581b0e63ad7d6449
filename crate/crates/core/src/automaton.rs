//! Finite automata written as state sets: one state, input, output, transition and output
//! formula per step, realized by the simulated trace.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::info::{InfoError, StateSet};
use crate::logic::{Signature, Term, Wff};
use crate::model::{evaluate, Interpretation, ModelError, QuantifierBudget};

/// Constant naming the machine in every formula.
pub const MACHINE: &str = "M";
/// Constant naming the output alphabet in `IsElementof(r, R)`.
pub const OUTPUT_SET: &str = "R";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("word of length {len} needs {needed} times, only {available} declared")]
    WordTooLong { len: usize, needed: usize, available: usize },
    #[error("unknown {kind} `{name}`")]
    UnknownSymbol { kind: &'static str, name: String },
    #[error("{0} is empty")]
    Empty(&'static str),
    #[error("no `{table}` entry for ({state}, {input})")]
    MissingEntry { table: &'static str, state: String, input: String },
    #[error("`{0}` is not a usable symbol name")]
    BadName(String),
    #[error("`{name}` is both {first} and {second}")]
    NameClash { name: String, first: &'static str, second: &'static str },
    #[error("time `{0}` is listed twice")]
    RepeatedTime(String),
    #[error("malformed automaton: {0}")]
    Json(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Info(#[from] Box<InfoError>),
}

/// A deterministic Mealy machine with a declared time axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAutomaton {
    pub states: Vec<String>,
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub next: BTreeMap<(String, String), String>,
    pub out: BTreeMap<(String, String), String>,
    /// Listed in increasing order.
    pub times: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAutomaton {
    states: Vec<String>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    next: BTreeMap<String, String>,
    out: BTreeMap<String, String>,
    times: Vec<String>,
}

fn split_key(k: &str) -> Result<(String, String), AutomatonError> {
    k.split_once(',')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| AutomatonError::Json(format!("table key `{k}` is not `state,input`")))
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_') && s != "forall" && s != "exists"
}

impl FiniteAutomaton {
    /// Checks non-emptiness, names, distinct times and total tables.
    pub fn validate(&self) -> Result<(), AutomatonError> {
        for (set, what) in [
            (&self.states, "state set"),
            (&self.inputs, "input set"),
            (&self.outputs, "output set"),
            (&self.times, "time set"),
        ] {
            if set.is_empty() {
                return Err(AutomatonError::Empty(what));
            }
            if let Some(bad) = set.iter().find(|s| !is_name(s)) {
                return Err(AutomatonError::BadName(bad.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for t in &self.times {
            if !seen.insert(t) {
                return Err(AutomatonError::RepeatedTime(t.clone()));
            }
        }
        let reserved = [(MACHINE, "the machine"), (OUTPUT_SET, "the output set")];
        let mut kinds: BTreeMap<&str, &'static str> = reserved.into_iter().collect();
        for t in &self.times {
            if let Some(first) = kinds.insert(t, "a time") {
                return Err(AutomatonError::NameClash { name: t.clone(), first, second: "a time" });
            }
        }
        for s in self.states.iter().chain(&self.inputs).chain(&self.outputs) {
            if let Some(&first) = kinds.get(s.as_str()) {
                if first != "a symbol" {
                    return Err(AutomatonError::NameClash { name: s.clone(), first, second: "a symbol" });
                }
            }
            kinds.insert(s, "a symbol");
        }
        for u in &self.states {
            for q in &self.inputs {
                let key = (u.clone(), q.clone());
                let entry = |table: &'static str| AutomatonError::MissingEntry {
                    table,
                    state: u.clone(),
                    input: q.clone(),
                };
                let v = self.next.get(&key).ok_or_else(|| entry("next"))?;
                if !self.states.contains(v) {
                    return Err(AutomatonError::UnknownSymbol { kind: "state", name: v.clone() });
                }
                let r = self.out.get(&key).ok_or_else(|| entry("out"))?;
                if !self.outputs.contains(r) {
                    return Err(AutomatonError::UnknownSymbol { kind: "output", name: r.clone() });
                }
            }
        }
        Ok(())
    }

    pub fn from_json_value(v: &Value) -> Result<Self, AutomatonError> {
        let raw: RawAutomaton =
            serde_json::from_value(v.clone()).map_err(|e| AutomatonError::Json(e.to_string()))?;
        let table = |m: BTreeMap<String, String>| {
            m.into_iter()
                .map(|(k, v)| Ok((split_key(&k)?, v)))
                .collect::<Result<BTreeMap<_, _>, AutomatonError>>()
        };
        let m = FiniteAutomaton {
            states: raw.states,
            inputs: raw.inputs,
            outputs: raw.outputs,
            next: table(raw.next)?,
            out: table(raw.out)?,
            times: raw.times,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self, AutomatonError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| AutomatonError::Json(format!("{}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| AutomatonError::Json(e.to_string()))?;
        FiniteAutomaton::from_json_value(&v)
    }

    pub fn to_json_value(&self) -> Value {
        let table = |m: &BTreeMap<(String, String), String>| -> BTreeMap<String, String> {
            m.iter().map(|((u, q), v)| (format!("{u},{q}"), v.clone())).collect()
        };
        serde_json::json!({
            "states": self.states,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "next": table(&self.next),
            "out": table(&self.out),
            "times": self.times,
        })
    }

    fn check_word(&self, initial: &str, word: &[String]) -> Result<(), AutomatonError> {
        if !self.states.iter().any(|s| s == initial) {
            return Err(AutomatonError::UnknownSymbol { kind: "state", name: initial.to_string() });
        }
        if let Some(q) = word.iter().find(|q| !self.inputs.contains(q)) {
            return Err(AutomatonError::UnknownSymbol { kind: "input", name: q.clone() });
        }
        Ok(())
    }
}

/// States visited (`states[0]` is the initial one) and outputs produced; `outputs[i]` is
/// emitted on the step into `states[i + 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trace {
    pub states: Vec<String>,
    pub outputs: Vec<String>,
}

pub fn simulate(m: &FiniteAutomaton, initial: &str, word: &[String]) -> Result<Trace, AutomatonError> {
    m.check_word(initial, word)?;
    let mut states = vec![initial.to_string()];
    let mut outputs = Vec::new();
    for q in word {
        let key = (states.last().unwrap().clone(), q.clone());
        let missing = |table| AutomatonError::MissingEntry { table, state: key.0.clone(), input: q.clone() };
        outputs.push(m.out.get(&key).ok_or_else(|| missing("out"))?.clone());
        states.push(m.next.get(&key).ok_or_else(|| missing("next"))?.clone());
    }
    Ok(Trace { states, outputs })
}

fn c(name: &str) -> Term {
    Term::cst(name)
}

/// `State(M, t, u)`.
pub fn phi_state(t: &str, u: &str) -> Wff {
    Wff::atom("State", vec![c(MACHINE), c(t), c(u)])
}

/// `Input(M, t, q)`.
pub fn phi_input(t: &str, q: &str) -> Wff {
    Wff::atom("Input", vec![c(MACHINE), c(t), c(q)])
}

/// `Output(M, t, r)`.
pub fn phi_output(t: &str, r: &str) -> Wff {
    Wff::atom("Output", vec![c(MACHINE), c(t), c(r)])
}

/// `State(M, t, u) & Input(M, t, q) -> Eq(u', delta(u, q)) & State(M, t', u')`.
pub fn phi_delta(t: &str, u: &str, q: &str, t_next: &str, u_next: &str) -> Wff {
    Wff::implies(
        Wff::and(phi_state(t, u), phi_input(t, q)),
        Wff::and(
            Wff::atom("Eq", vec![c(u_next), Term::app("delta", vec![c(u), c(q)])]),
            phi_state(t_next, u_next),
        ),
    )
}

/// `State(M, t, u) & Input(M, t, q) -> Eq(r, lambda(u, q)) & IsElementof(r, R) & Output(M, t', r)`.
pub fn phi_lambda(t: &str, u: &str, q: &str, t_next: &str, r: &str) -> Wff {
    Wff::implies(
        Wff::and(phi_state(t, u), phi_input(t, q)),
        Wff::and(
            Wff::and(
                Wff::atom("Eq", vec![c(r), Term::app("lambda", vec![c(u), c(q)])]),
                Wff::atom("IsElementof", vec![c(r), c(OUTPUT_SET)]),
            ),
            phi_output(t_next, r),
        ),
    )
}

/// The signature every encoding uses, over the machine's symbols and times.
pub fn encoding_signature(m: &FiniteAutomaton) -> Result<Signature, AutomatonError> {
    let mut constants: Vec<&str> = vec![MACHINE, OUTPUT_SET];
    for s in m.times.iter().chain(&m.states).chain(&m.inputs).chain(&m.outputs) {
        if !constants.contains(&s.as_str()) {
            constants.push(s);
        }
    }
    let sig = Signature::from_parts(
        constants,
        [("delta", 2), ("lambda", 2)].map(|(n, a)| (n.to_string(), a)),
        [("State", 3), ("Input", 3), ("Output", 3), ("Eq", 2), ("IsElementof", 2)].map(|(n, a)| (n.to_string(), a)),
    )
    .map_err(ModelError::from)?;
    Ok(sig)
}

/// Formulas of one run of the machine and the interpretation read off its trace. The
/// realization is kept separately from the formulas so that a tampered one can be checked.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedAutomaton {
    pub formulas: Vec<Wff>,
    pub realization: Interpretation,
    pub trace: Trace,
    pub word: Vec<String>,
    pub times: Vec<String>,
}

/// Which formula of a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepFormula {
    State,
    Input,
    Output,
    Delta,
    Lambda,
}

pub fn encode_automaton(
    m: &FiniteAutomaton,
    initial: &str,
    word: &[String],
) -> Result<EncodedAutomaton, AutomatonError> {
    m.validate()?;
    if word.len() + 1 > m.times.len() {
        return Err(AutomatonError::WordTooLong {
            len: word.len(),
            needed: word.len() + 1,
            available: m.times.len(),
        });
    }
    let trace = simulate(m, initial, word)?;
    let t = &m.times;
    let u = &trace.states;
    let mut formulas = vec![phi_state(&t[0], &u[0])];
    for (i, q) in word.iter().enumerate() {
        let r = &trace.outputs[i];
        formulas.push(phi_input(&t[i], q));
        formulas.push(phi_state(&t[i + 1], &u[i + 1]));
        formulas.push(phi_output(&t[i + 1], r));
        formulas.push(phi_delta(&t[i], &u[i], q, &t[i + 1], &u[i + 1]));
        formulas.push(phi_lambda(&t[i], &u[i], q, &t[i + 1], r));
    }

    let sig = encoding_signature(m)?;
    let domain: Vec<String> = sig.constants().map(str::to_string).collect();
    let mut interp = Interpretation::new(sig.clone(), domain.iter().cloned())?;
    for d in &domain {
        interp.set_constant(d, d)?;
        interp.add_tuple("Eq", &[d, d])?;
    }
    for r in &m.outputs {
        interp.add_tuple("IsElementof", &[r, OUTPUT_SET])?;
    }
    interp.set_function("delta", table_cells(&domain, &m.next))?;
    interp.set_function("lambda", table_cells(&domain, &m.out))?;
    interp.add_tuple("State", &[MACHINE, &t[0], &u[0]])?;
    for (i, q) in word.iter().enumerate() {
        interp.add_tuple("Input", &[MACHINE, &t[i], q])?;
        interp.add_tuple("State", &[MACHINE, &t[i + 1], &u[i + 1]])?;
        interp.add_tuple("Output", &[MACHINE, &t[i + 1], &trace.outputs[i]])?;
    }
    Ok(EncodedAutomaton {
        formulas,
        realization: interp,
        trace,
        word: word.to_vec(),
        times: t[..word.len() + 1].to_vec(),
    })
}

/// Every cell over the domain; pairs outside the machine's tables go to the first element.
fn table_cells<'a>(
    domain: &'a [String],
    table: &'a BTreeMap<(String, String), String>,
) -> Vec<(Vec<&'a str>, &'a str)> {
    let mut out = Vec::new();
    for a in domain {
        for b in domain {
            let v = table.get(&(a.clone(), b.clone())).map_or(domain[0].as_str(), String::as_str);
            out.push((vec![a.as_str(), b.as_str()], v));
        }
    }
    out
}

impl EncodedAutomaton {
    /// Index into `formulas` of the given formula at `step` (0-based). The state formula
    /// exists for `step <= word.len()`, the others for `step < word.len()`.
    pub fn formula_index(&self, kind: StepFormula, step: usize) -> Option<usize> {
        let n = self.word.len();
        match kind {
            StepFormula::State if step == 0 => Some(0),
            StepFormula::State if step <= n => Some(1 + 5 * (step - 1) + 1),
            StepFormula::Input if step < n => Some(1 + 5 * step),
            StepFormula::Output if step < n => Some(1 + 5 * step + 2),
            StepFormula::Delta if step < n => Some(1 + 5 * step + 3),
            StepFormula::Lambda if step < n => Some(1 + 5 * step + 4),
            _ => None,
        }
    }

    /// The encoding as a state set over the machine's times.
    pub fn state_set(&self, budget: &QuantifierBudget) -> Result<StateSet, AutomatonError> {
        StateSet::new(
            "S_M",
            vec![MACHINE.to_string()],
            self.times.clone(),
            self.formulas.clone(),
            self.realization.clone(),
            budget,
        )
        .map_err(|e| AutomatonError::Info(Box::new(e)))
    }

    pub fn with_realization(&self, realization: Interpretation) -> Self {
        EncodedAutomaton { realization, ..self.clone() }
    }
}

/// Whether every formula holds under the realization.
pub fn verify_trace(e: &EncodedAutomaton) -> bool {
    let budget = QuantifierBudget::default();
    e.formulas
        .iter()
        .all(|f| evaluate(f, &e.realization, &budget).unwrap_or(false))
}

/// Ways of corrupting a realization that a correct verifier must notice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mutation {
    /// Move the machine at step `step` into `to` instead.
    State { step: usize, to: String },
    Input { step: usize, to: String },
    Output { step: usize, to: String },
    /// Redirect the transition used at `step`.
    Next { step: usize, to: String },
    /// Redirect the output function entry used at `step`.
    Out { step: usize, to: String },
}

/// Every single-point mutation of `e` that actually changes something.
pub fn mutations(m: &FiniteAutomaton, e: &EncodedAutomaton) -> Vec<Mutation> {
    let mut out = Vec::new();
    let u = &e.trace.states;
    for (step, s) in u.iter().enumerate() {
        out.extend(m.states.iter().filter(|x| *x != s).map(|x| Mutation::State { step, to: x.clone() }));
    }
    for (step, q) in e.word.iter().enumerate() {
        out.extend(m.inputs.iter().filter(|x| *x != q).map(|x| Mutation::Input { step, to: x.clone() }));
        let r = &e.trace.outputs[step];
        out.extend(m.outputs.iter().filter(|x| *x != r).map(|x| Mutation::Output { step, to: x.clone() }));
        out.extend(m.states.iter().filter(|x| **x != u[step + 1]).map(|x| Mutation::Next { step, to: x.clone() }));
        out.extend(m.outputs.iter().filter(|x| *x != r).map(|x| Mutation::Out { step, to: x.clone() }));
    }
    out
}

fn set_cell(
    interp: &Interpretation,
    function: &str,
    key: (&str, &str),
    to: &str,
) -> Result<Interpretation, ModelError> {
    let domain: Vec<String> = interp.domain().to_vec();
    let mut entries = Vec::new();
    for a in &domain {
        for b in &domain {
            let ai = interp.element(a)?;
            let bi = interp.element(b)?;
            let v = if (a.as_str(), b.as_str()) == key {
                to.to_string()
            } else {
                interp.element_name(interp.apply(function, &[ai, bi])?).to_string()
            };
            entries.push((a.clone(), b.clone(), v));
        }
    }
    let mut next = interp.clone();
    next.set_function(
        function,
        entries.iter().map(|(a, b, v)| (vec![a.as_str(), b.as_str()], v.as_str())),
    )?;
    Ok(next)
}

/// The realization with one mutation applied.
pub fn apply_mutation(e: &EncodedAutomaton, mutation: &Mutation) -> Result<EncodedAutomaton, ModelError> {
    let t = &e.times;
    let mut r = e.realization.clone();
    match mutation {
        Mutation::State { step, to } => {
            r.remove_tuple("State", &[MACHINE, &t[*step], &e.trace.states[*step]])?;
            r.add_tuple("State", &[MACHINE, &t[*step], to])?;
        }
        Mutation::Input { step, to } => {
            r.remove_tuple("Input", &[MACHINE, &t[*step], &e.word[*step]])?;
            r.add_tuple("Input", &[MACHINE, &t[*step], to])?;
        }
        Mutation::Output { step, to } => {
            r.remove_tuple("Output", &[MACHINE, &t[*step + 1], &e.trace.outputs[*step]])?;
            r.add_tuple("Output", &[MACHINE, &t[*step + 1], to])?;
        }
        Mutation::Next { step, to } => {
            r = set_cell(&r, "delta", (&e.trace.states[*step], &e.word[*step]), to)?;
        }
        Mutation::Out { step, to } => {
            r = set_cell(&r, "lambda", (&e.trace.states[*step], &e.word[*step]), to)?;
        }
    }
    Ok(e.with_realization(r))
}

/// What the recognizer found in a formula set laid out like an encoding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecognizedRun {
    pub machine: String,
    /// State asserted at each time, in first-mention order.
    pub states: Vec<(String, String)>,
}

fn consts(args: &[Term]) -> Option<Vec<&str>> {
    args.iter()
        .map(|t| match t {
            Term::Const(c) => Some(c.as_str()),
            _ => None,
        })
        .collect()
}

fn atom_consts<'w>(f: &'w Wff, pred: &str) -> Option<Vec<&'w str>> {
    match f {
        Wff::Atom(p, args) if p == pred => consts(args),
        _ => None,
    }
}

fn match_step(f: &Wff) -> Option<(&'static str, Vec<&str>)> {
    for p in ["State", "Input", "Output"] {
        if let Some(a) = atom_consts(f, p).filter(|a| a.len() == 3) {
            return Some((p, a));
        }
    }
    let Wff::Implies(lhs, rhs) = f else { return None };
    let Wff::And(s, i) = lhs.as_ref() else { return None };
    let s = atom_consts(s, "State")?;
    let i = atom_consts(i, "Input")?;
    if s.len() != 3 || i.len() != 3 || s[0] != i[0] || s[1] != i[1] {
        return None;
    }
    let (t, u, q) = (s[1], s[2], i[2]);
    let Wff::And(a, b) = rhs.as_ref() else { return None };
    let check_app = |term: &Term, name: &str| matches!(term, Term::App(n, xs) if n == name && consts(xs) == Some(vec![u, q]));
    if let Wff::Atom(p, args) = a.as_ref() {
        if p == "Eq" && args.len() == 2 && check_app(&args[1], "delta") {
            let v = consts(&args[..1])?[0];
            let next = atom_consts(b, "State")?;
            return (next.len() == 3 && next[0] == s[0] && next[2] == v).then(|| ("delta", vec![s[0], t, v]));
        }
    }
    let Wff::And(eq, elem) = a.as_ref() else { return None };
    let Wff::Atom(p, args) = eq.as_ref() else { return None };
    if p != "Eq" || args.len() != 2 || !check_app(&args[1], "lambda") {
        return None;
    }
    let r = consts(&args[..1])?[0];
    let e = atom_consts(elem, "IsElementof")?;
    let o = atom_consts(b, "Output")?;
    (e.len() == 2 && e[0] == r && o.len() == 3 && o[0] == s[0] && o[2] == r).then(|| ("lambda", vec![s[0], t, r]))
}

/// Recognizes formula sets shaped like an encoded run: every formula is one of the five step
/// formulas, all about one machine, with at most one state per time.
pub fn recognize(formulas: &[Wff]) -> Option<RecognizedRun> {
    let mut machine: Option<String> = None;
    let mut states: Vec<(String, String)> = Vec::new();
    for f in formulas {
        let f = f.resugar();
        let (kind, args) = match_step(&f)?;
        if *machine.get_or_insert_with(|| args[0].to_string()) != args[0] {
            return None;
        }
        if kind == "State" {
            match states.iter().find(|(t, _)| t == args[1]) {
                Some((_, u)) if u != args[2] => return None,
                Some(_) => {}
                None => states.push((args[1].to_string(), args[2].to_string())),
            }
        }
    }
    Some(RecognizedRun { machine: machine?, states })
}

/// A random complete machine with up to `max_states` states and `max_inputs` inputs, a random
/// initial state and a word of length up to `max_word`, with enough times for the word.
pub fn random_run<R: Rng + ?Sized>(
    rng: &mut R,
    max_states: usize,
    max_inputs: usize,
    max_outputs: usize,
    max_word: usize,
) -> (FiniteAutomaton, String, Vec<String>) {
    let states: Vec<String> = (0..rng.random_range(1..=max_states)).map(|i| format!("u{i}")).collect();
    let inputs: Vec<String> = (0..rng.random_range(1..=max_inputs)).map(|i| format!("i{i}")).collect();
    let outputs: Vec<String> = (0..rng.random_range(1..=max_outputs)).map(|i| format!("o{i}")).collect();
    let mut next = BTreeMap::new();
    let mut out = BTreeMap::new();
    for u in &states {
        for q in &inputs {
            next.insert((u.clone(), q.clone()), states.choose(rng).unwrap().clone());
            out.insert((u.clone(), q.clone()), outputs.choose(rng).unwrap().clone());
        }
    }
    let len = rng.random_range(0..=max_word);
    let word = (0..len).map(|_| inputs.choose(rng).unwrap().clone()).collect();
    let times = (1..=len + 1).map(|i| format!("t{i}")).collect();
    let initial = states.choose(rng).unwrap().clone();
    (FiniteAutomaton { states, inputs, outputs, next, out, times }, initial, word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::format_formula;

    pub(crate) fn parity() -> FiniteAutomaton {
        let v = serde_json::json!({
            "states": ["even", "odd"],
            "inputs": ["0", "1"],
            "outputs": ["0", "1"],
            "next": {"even,0": "even", "even,1": "odd", "odd,0": "odd", "odd,1": "even"},
            "out": {"even,0": "0", "even,1": "1", "odd,0": "1", "odd,1": "0"},
            "times": ["t1", "t2", "t3", "t4"]
        });
        FiniteAutomaton::from_json_value(&v).unwrap()
    }

    fn w(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn parity_trace() {
        let t = simulate(&parity(), "even", &w("11")).unwrap();
        assert_eq!(t.states, vec!["even", "odd", "even"]);
        assert_eq!(t.outputs, vec!["1", "0"]);
        assert_eq!(simulate(&parity(), "even", &[]).unwrap(), Trace { states: vec!["even".into()], outputs: vec![] });
    }

    #[test]
    fn parity_encoding() {
        let e = encode_automaton(&parity(), "even", &w("1")).unwrap();
        let texts: Vec<String> = e.formulas.iter().map(format_formula).collect();
        assert_eq!(
            texts,
            vec![
                "State(M, t1, even)",
                "Input(M, t1, 1)",
                "State(M, t2, odd)",
                "Output(M, t2, 1)",
                "State(M, t1, even) & Input(M, t1, 1) -> Eq(odd, delta(even, 1)) & State(M, t2, odd)",
                "State(M, t1, even) & Input(M, t1, 1) -> Eq(1, lambda(even, 1)) & IsElementof(1, R) & Output(M, t2, 1)",
            ]
        );
        assert!(verify_trace(&e));
        assert_eq!(e.formula_index(StepFormula::State, 1), Some(2));
        assert_eq!(e.formula_index(StepFormula::Lambda, 0), Some(5));
        assert!(e.state_set(&QuantifierBudget::default()).is_ok());
    }

    #[test]
    fn empty_word_only_initial_state() {
        let e = encode_automaton(&parity(), "odd", &[]).unwrap();
        assert_eq!(e.formulas, vec![phi_state("t1", "odd")]);
    }

    #[test]
    fn word_length_limited_by_times() {
        assert_eq!(
            encode_automaton(&parity(), "even", &w("0101")).unwrap_err(),
            AutomatonError::WordTooLong { len: 4, needed: 5, available: 4 }
        );
        assert_eq!(
            simulate(&parity(), "even", &w("2")).unwrap_err(),
            AutomatonError::UnknownSymbol { kind: "input", name: "2".into() }
        );
    }

    #[test]
    fn tampering_detected() {
        let e = encode_automaton(&parity(), "even", &w("10")).unwrap();
        for m in mutations(&parity(), &e) {
            assert!(!verify_trace(&apply_mutation(&e, &m).unwrap()), "{m:?}");
        }
    }

    #[test]
    fn recognizer() {
        let e = encode_automaton(&parity(), "even", &w("10")).unwrap();
        let r = recognize(&e.formulas).unwrap();
        assert_eq!(r.machine, "M");
        assert_eq!(r.states.len(), 3);
        assert!(recognize(&[Wff::prop("A")]).is_none());
        let mut clash = e.formulas.clone();
        clash.push(phi_state("t1", "odd"));
        assert!(recognize(&clash).is_none());
    }

    #[test]
    fn incomplete_table_rejected() {
        let mut m = parity();
        m.next.remove(&("odd".to_string(), "1".to_string()));
        assert!(matches!(m.validate(), Err(AutomatonError::MissingEntry { table: "next", .. })));
    }
}
