//! A single-layer linear model with quadratic loss, written into and read back from formulas,
//! and the gradient learner and predictor built on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;

use super::{LearnError, LearnRule, ProcessRule};
use crate::logic::{Term, Wff};
use crate::model::QuantifierBudget;

pub type Rational = BigRational;

/// Largest parameter count the learner accepts.
pub const MAX_PARAMS: usize = 4;

/// `q3`, `qm3`, `q3_4`, `qm3_4` for 3, -3, 3/4, -3/4.
pub fn rational_constant(v: &Rational) -> String {
    let sign = if v.is_negative() { "m" } else { "" };
    let num = v.numer().abs();
    if v.denom().is_one() {
        format!("q{sign}{num}")
    } else {
        format!("q{sign}{num}_{}", v.denom())
    }
}

pub fn parse_rational_constant(s: &str) -> Option<Rational> {
    let body = s.strip_prefix('q')?;
    let (neg, body) = match body.strip_prefix('m') {
        Some(rest) => (true, rest),
        None => (false, body),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (n, d) = match body.split_once('_') {
        Some((n, d)) if digits(n) && digits(d) => (n, d),
        None if digits(body) => (body, "1"),
        _ => return None,
    };
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    let v = Rational::new(n.parse().ok()?, d);
    if rational_constant(&if neg { -v.clone() } else { v.clone() }) != s {
        return None;
    }
    Some(if neg { -v } else { v })
}

/// Parses decimal or fraction text such as `0.15`, `-3/4`, `2` or `1.5e-3`.
pub fn parse_rational_text(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let e: i32 = e.parse().ok()?;
        let scale = Rational::from_integer(BigInt::from(10u8).pow(e.unsigned_abs()));
        let m = parse_rational_text(m).filter(|_| !m.contains('/'))?;
        return Some(if e < 0 { m / scale } else { m * scale });
    }
    if let Some((n, d)) = s.split_once('/') {
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n.trim().parse().ok()?, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    let all = format!("{int}{frac}");
    if !all.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let v = Rational::new(all.parse().ok()?, BigInt::from(10u8).pow(frac.len() as u32));
    Some(if neg { -v } else { v })
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// The rational closest to `x` that a decimal print of it denotes exactly.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    parse_rational_text(&format!("{x}"))
}

/// A JSON number, or a string holding decimal or fraction text.
pub fn value_to_rational(v: &serde_json::Value) -> Option<Rational> {
    match v {
        serde_json::Value::String(s) => parse_rational_text(s),
        serde_json::Value::Number(n) => parse_rational_text(&n.to_string()),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Activation {
    Identity,
    Relu,
}

impl Activation {
    pub fn name(self) -> &'static str {
        match self {
            Activation::Identity => "identity",
            Activation::Relu => "relu",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "identity" => Some(Activation::Identity),
            "relu" => Some(Activation::Relu),
            _ => None,
        }
    }

    pub fn apply(self, z: &Rational) -> Rational {
        match self {
            Activation::Relu if z.is_negative() => Rational::zero(),
            _ => z.clone(),
        }
    }

    /// Derivative, taking 0 at the relu kink.
    pub fn derivative(self, z: &Rational) -> Rational {
        match self {
            Activation::Relu if !z.is_positive() => Rational::zero(),
            _ => Rational::one(),
        }
    }

    pub fn apply_f64(self, z: f64) -> f64 {
        match self {
            Activation::Relu => z.max(0.0),
            Activation::Identity => z,
        }
    }

    pub fn derivative_f64(self, z: f64) -> f64 {
        match self {
            Activation::Relu if z <= 0.0 => 0.0,
            _ => 1.0,
        }
    }

    /// Both activations accept every real input.
    pub fn accepts(self, _x: &Rational) -> bool {
        true
    }
}

/// Parameters (weights row-major, then biases), hyperparameters and shape of the model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyModelState {
    pub params: Vec<Rational>,
    pub rate: Rational,
    pub momentum: Rational,
    pub velocity: Vec<Rational>,
    /// Layer widths, input first.
    pub architecture: Vec<usize>,
    pub bias: bool,
    pub activations: Vec<Activation>,
}

/// Training samples and the loss they are scored with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToyBatch {
    pub inputs: Vec<Vec<Rational>>,
    pub targets: Vec<Vec<Rational>>,
    pub loss: String,
}

fn idx(prefix: &str, i: usize) -> Term {
    Term::cst(format!("{prefix}{i}"))
}

fn num(v: &Rational) -> Term {
    Term::cst(rational_constant(v))
}

fn conj(atoms: Vec<Wff>) -> Wff {
    Wff::conjoin(atoms).expect("non-empty")
}

fn top_atoms(formulas: &[Wff]) -> Vec<(String, Vec<String>)> {
    fn walk(f: &Wff, out: &mut Vec<(String, Vec<String>)>) {
        match f {
            Wff::And(a, b) => {
                walk(a, out);
                walk(b, out);
            }
            Wff::Atom(p, args) => {
                let names = args
                    .iter()
                    .map(|t| match t {
                        Term::Const(c) => c.clone(),
                        _ => String::new(),
                    })
                    .collect();
                out.push((p.clone(), names));
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    formulas.iter().for_each(|f| walk(f, &mut out));
    out
}

fn index_of(prefix: &str, s: &str) -> Result<usize, LearnError> {
    s.strip_prefix(prefix)
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| LearnError::BadState(format!("`{s}` is not a `{prefix}` index")))
}

fn value_of(s: &str) -> Result<Rational, LearnError> {
    parse_rational_constant(s).ok_or_else(|| LearnError::BadState(format!("`{s}` is not a number")))
}

/// Collects `index -> value` entries into a dense vector.
fn dense(entries: BTreeMap<usize, Rational>, what: &str) -> Result<Vec<Rational>, LearnError> {
    let n = entries.len();
    if entries.keys().copied().ne(0..n) {
        return Err(LearnError::BadState(format!("{what} indices are not 0..{n}")));
    }
    Ok(entries.into_values().collect())
}

fn single<'a>(atoms: &'a [(String, Vec<String>)], name: &str) -> Result<&'a [String], LearnError> {
    let mut hits = atoms.iter().filter(|(p, _)| p == name);
    match (hits.next(), hits.next()) {
        (Some((_, args)), None) => Ok(args),
        (None, _) => Err(LearnError::BadState(format!("no `{name}` fact"))),
        _ => Err(LearnError::BadState(format!("several `{name}` facts"))),
    }
}

impl ToyModelState {
    /// Count of weights and biases implied by the architecture.
    pub fn expected_params(&self) -> Option<usize> {
        match self.architecture.as_slice() {
            [d_in, d_out] => Some(d_in * d_out + if self.bias { *d_out } else { 0 }),
            _ => None,
        }
    }

    pub fn input_dim(&self) -> Option<usize> {
        self.architecture.first().copied()
    }

    /// Width of the output layer; `None` when the architecture has no layer after the input.
    pub fn output_dim(&self) -> Option<usize> {
        match self.architecture.as_slice() {
            [_, d_out] if *d_out > 0 => Some(*d_out),
            _ => None,
        }
    }

    /// Shape and hyperparameter checks.
    pub fn check(&self) -> Result<(), String> {
        let expected = self
            .expected_params()
            .ok_or_else(|| format!("architecture {:?} is not input and output widths", self.architecture))?;
        if self.architecture.contains(&0) {
            return Err("layer widths must be positive".into());
        }
        if self.params.len() != expected {
            return Err(format!("{} parameters for an architecture needing {expected}", self.params.len()));
        }
        if expected > MAX_PARAMS {
            return Err(format!("{expected} parameters exceed the limit of {MAX_PARAMS}"));
        }
        if self.velocity.len() != expected {
            return Err(format!("velocity has {} entries, expected {expected}", self.velocity.len()));
        }
        if !self.rate.is_positive() {
            return Err("learning rate must be positive".into());
        }
        if self.momentum.is_negative() {
            return Err("momentum must be non-negative".into());
        }
        if self.activations.len() != 1 {
            return Err(format!("{} activations for one layer", self.activations.len()));
        }
        Ok(())
    }

    /// `Param(p_i, θ_i) & Velocity(p_i, v_i) & Rate(η) & Momentum(β) & Architecture(d.., d..)
    /// [& HasBias] & Activation(a)` as one conjunction.
    pub fn to_formula(&self) -> Wff {
        let mut atoms = Vec::new();
        for (i, p) in self.params.iter().enumerate() {
            atoms.push(Wff::atom("Param", vec![idx("p", i), num(p)]));
        }
        for (i, v) in self.velocity.iter().enumerate() {
            atoms.push(Wff::atom("Velocity", vec![idx("p", i), num(v)]));
        }
        atoms.push(Wff::atom("Rate", vec![num(&self.rate)]));
        atoms.push(Wff::atom("Momentum", vec![num(&self.momentum)]));
        atoms.push(Wff::atom("Architecture", self.architecture.iter().map(|&d| idx("d", d)).collect()));
        if self.bias {
            atoms.push(Wff::prop("HasBias"));
        }
        for a in &self.activations {
            atoms.push(Wff::atom("Activation", vec![Term::cst(a.name())]));
        }
        conj(atoms)
    }

    /// Reads the model back from the top-level facts of `formulas`.
    pub fn from_formulas(formulas: &[Wff]) -> Result<Self, LearnError> {
        let atoms = top_atoms(formulas);
        let mut params = BTreeMap::new();
        let mut velocity = BTreeMap::new();
        let mut activations = Vec::new();
        let mut bias = false;
        for (p, args) in &atoms {
            match (p.as_str(), args.as_slice()) {
                ("Param", [i, v]) => {
                    params.insert(index_of("p", i)?, value_of(v)?);
                }
                ("Velocity", [i, v]) => {
                    velocity.insert(index_of("p", i)?, value_of(v)?);
                }
                ("HasBias", []) => bias = true,
                ("Activation", [a]) => activations.push(
                    Activation::parse(a).ok_or_else(|| LearnError::BadState(format!("unknown activation `{a}`")))?,
                ),
                _ => {}
            }
        }
        let architecture = single(&atoms, "Architecture")?
            .iter()
            .map(|d| index_of("d", d))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ToyModelState {
            params: dense(params, "parameter")?,
            velocity: dense(velocity, "velocity")?,
            rate: value_of(&single(&atoms, "Rate")?.join(""))?,
            momentum: value_of(&single(&atoms, "Momentum")?.join(""))?,
            architecture,
            bias,
            activations,
        })
    }

    fn weight(&self, j: usize, i: usize) -> &Rational {
        &self.params[j * self.architecture[0] + i]
    }

    fn pre_activation(&self, x: &[Rational]) -> Vec<Rational> {
        let (d_in, d_out) = (self.architecture[0], self.architecture[1]);
        (0..d_out)
            .map(|j| {
                let mut z = (0..d_in).fold(Rational::zero(), |acc, i| acc + self.weight(j, i) * &x[i]);
                if self.bias {
                    z += &self.params[d_in * d_out + j];
                }
                z
            })
            .collect()
    }

    /// `a(Wx + b)`.
    pub fn predict(&self, x: &[Rational]) -> Vec<Rational> {
        let a = self.activations[0];
        self.pre_activation(x).iter().map(|z| a.apply(z)).collect()
    }

    /// Mean over samples of the squared output error.
    pub fn loss(&self, batch: &ToyBatch) -> Rational {
        let total = batch.inputs.iter().zip(&batch.targets).fold(Rational::zero(), |acc, (x, y)| {
            acc + self
                .predict(x)
                .iter()
                .zip(y)
                .fold(Rational::zero(), |s, (p, t)| s + (p - t) * (p - t))
        });
        total / int(batch.inputs.len() as i64)
    }

    /// Gradient of [`ToyModelState::loss`] with respect to the parameters.
    pub fn gradient(&self, batch: &ToyBatch) -> Vec<Rational> {
        let (d_in, d_out) = (self.architecture[0], self.architecture[1]);
        let a = self.activations[0];
        let mut g = vec![Rational::zero(); self.params.len()];
        for (x, y) in batch.inputs.iter().zip(&batch.targets) {
            let z = self.pre_activation(x);
            for j in 0..d_out {
                let delta = int(2) * (a.apply(&z[j]) - &y[j]) * a.derivative(&z[j]);
                for i in 0..d_in {
                    g[j * d_in + i] += &delta * &x[i];
                }
                if self.bias {
                    g[d_in * d_out + j] += &delta;
                }
            }
        }
        let b = int(batch.inputs.len() as i64);
        g.into_iter().map(|v| v / &b).collect()
    }

    /// One momentum step: `v = ∇L + β v_prev`, `θ = θ - η v`.
    pub fn step(&self, batch: &ToyBatch) -> ToyModelState {
        let (params, velocity) = gradient_step(
            &self.params,
            &self.gradient(batch),
            &self.rate,
            &self.momentum,
            &self.velocity,
        );
        ToyModelState { params, velocity, ..self.clone() }
    }

    /// [`ToyModelState::step`] in floating point; returns the new parameters.
    pub fn step_f64(&self, batch: &ToyBatch) -> Vec<f64> {
        let f = |q: &Rational| q.to_f64().unwrap_or(f64::NAN);
        let (d_in, d_out) = (self.architecture[0], self.architecture[1]);
        let a = self.activations[0];
        let theta: Vec<f64> = self.params.iter().map(f).collect();
        let mut g = vec![0.0; theta.len()];
        for (x, y) in batch.inputs.iter().zip(&batch.targets) {
            let x: Vec<f64> = x.iter().map(f).collect();
            for j in 0..d_out {
                let mut z: f64 = (0..d_in).map(|i| theta[j * d_in + i] * x[i]).sum();
                if self.bias {
                    z += theta[d_in * d_out + j];
                }
                let delta = 2.0 * (a.apply_f64(z) - f(&y[j])) * a.derivative_f64(z);
                for i in 0..d_in {
                    g[j * d_in + i] += delta * x[i];
                }
                if self.bias {
                    g[d_in * d_out + j] += delta;
                }
            }
        }
        let b = batch.inputs.len() as f64;
        let (eta, beta) = (f(&self.rate), f(&self.momentum));
        theta
            .iter()
            .zip(&g)
            .zip(&self.velocity)
            .map(|((t, gi), v)| t - eta * (gi / b + beta * f(v)))
            .collect()
    }
}

/// `θ_new = θ - η(∇ + β v_prev)` together with the new velocity `∇ + β v_prev`.
pub fn gradient_step(
    theta: &[Rational],
    grad: &[Rational],
    eta: &Rational,
    beta: &Rational,
    v_prev: &[Rational],
) -> (Vec<Rational>, Vec<Rational>) {
    let velocity: Vec<Rational> = grad.iter().zip(v_prev).map(|(g, v)| g + beta * v).collect();
    let theta = theta.iter().zip(&velocity).map(|(t, v)| t - eta * v).collect();
    (theta, velocity)
}

impl ToyBatch {
    /// `BatchShape(d_b, d_k) & Input(s_n, f_i, x) & Target(s_n, o_j, y) & Differentiable(loss)`.
    pub fn to_formula(&self) -> Wff {
        let width = self.inputs.first().map_or(0, Vec::len);
        let mut atoms = vec![Wff::atom("BatchShape", vec![idx("d", self.inputs.len()), idx("d", width)])];
        for (n, x) in self.inputs.iter().enumerate() {
            for (i, v) in x.iter().enumerate() {
                atoms.push(Wff::atom("Input", vec![idx("s", n), idx("f", i), num(v)]));
            }
        }
        for (n, y) in self.targets.iter().enumerate() {
            for (j, v) in y.iter().enumerate() {
                atoms.push(Wff::atom("Target", vec![idx("s", n), idx("o", j), num(v)]));
            }
        }
        atoms.push(Wff::atom("Differentiable", vec![Term::cst(self.loss.clone())]));
        conj(atoms)
    }

    /// The batch and its declared `(samples, width)` shape.
    pub fn from_formulas(formulas: &[Wff]) -> Result<(Self, (usize, usize)), LearnError> {
        let atoms = top_atoms(formulas);
        let shape = match single(&atoms, "BatchShape")? {
            [b, d] => (index_of("d", b)?, index_of("d", d)?),
            _ => return Err(LearnError::BadState("`BatchShape` takes two sizes".into())),
        };
        let mut inputs: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
        let mut targets: BTreeMap<usize, BTreeMap<usize, Rational>> = BTreeMap::new();
        for (p, args) in &atoms {
            match (p.as_str(), args.as_slice()) {
                ("Input", [s, i, v]) => {
                    inputs.entry(index_of("s", s)?).or_default().insert(index_of("f", i)?, value_of(v)?);
                }
                ("Target", [s, j, v]) => {
                    targets.entry(index_of("s", s)?).or_default().insert(index_of("o", j)?, value_of(v)?);
                }
                _ => {}
            }
        }
        let rows = |m: BTreeMap<usize, BTreeMap<usize, Rational>>, what: &str| {
            let m = m
                .into_iter()
                .map(|(k, row)| Ok((k, dense(row, what)?)))
                .collect::<Result<BTreeMap<_, _>, LearnError>>()?;
            let n = m.len();
            if m.keys().copied().ne(0..n) {
                return Err(LearnError::BadState(format!("{what} sample indices are not 0..{n}")));
            }
            Ok(m.into_values().collect::<Vec<_>>())
        };
        let inputs = rows(inputs, "input")?;
        let targets = rows(targets, "target")?;
        let loss = single(&atoms, "Differentiable")?.join("");
        Ok((ToyBatch { inputs, targets, loss }, shape))
    }
}

/// JSON form: `{"params": [...], "rate": .., "momentum": .., "velocity": [...],
/// "architecture": [d_in, d_out], "bias": bool, "activations": [...]}`; numbers may be JSON
/// numbers or strings such as `"1/3"`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    params: Vec<serde_json::Value>,
    rate: serde_json::Value,
    #[serde(default)]
    momentum: Option<serde_json::Value>,
    #[serde(default)]
    velocity: Option<Vec<serde_json::Value>>,
    architecture: Vec<usize>,
    #[serde(default)]
    bias: bool,
    #[serde(default)]
    activations: Option<Vec<String>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBatch {
    inputs: Vec<Vec<serde_json::Value>>,
    targets: Vec<Vec<serde_json::Value>>,
    #[serde(default)]
    loss: Option<String>,
}

fn rationals(vs: &[serde_json::Value]) -> Result<Vec<Rational>, LearnError> {
    vs.iter()
        .map(|v| value_to_rational(v).ok_or_else(|| LearnError::BadState(format!("`{v}` is not a number"))))
        .collect()
}

impl ToyModelState {
    pub fn from_json_value(v: &serde_json::Value) -> Result<Self, LearnError> {
        let raw: RawModel =
            serde_json::from_value(v.clone()).map_err(|e| LearnError::BadState(e.to_string()))?;
        let params = rationals(&raw.params)?;
        let velocity = match raw.velocity {
            Some(v) => rationals(&v)?,
            None => vec![Rational::zero(); params.len()],
        };
        let activations = raw
            .activations
            .unwrap_or_else(|| vec!["identity".into()])
            .iter()
            .map(|a| Activation::parse(a).ok_or_else(|| LearnError::BadState(format!("unknown activation `{a}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        let m = ToyModelState {
            params,
            rate: rationals(&[raw.rate])?.remove(0),
            momentum: match raw.momentum {
                Some(b) => rationals(&[b])?.remove(0),
                None => Rational::zero(),
            },
            velocity,
            architecture: raw.architecture,
            bias: raw.bias,
            activations,
        };
        m.check().map_err(LearnError::BadState)?;
        Ok(m)
    }
}

impl ToyBatch {
    pub fn from_json_value(v: &serde_json::Value) -> Result<Self, LearnError> {
        let raw: RawBatch =
            serde_json::from_value(v.clone()).map_err(|e| LearnError::BadState(e.to_string()))?;
        Ok(ToyBatch {
            inputs: raw.inputs.iter().map(|r| rationals(r)).collect::<Result<_, _>>()?,
            targets: raw.targets.iter().map(|r| rationals(r)).collect::<Result<_, _>>()?,
            loss: raw.loss.unwrap_or_else(|| "quadratic".into()),
        })
    }
}

/// `Query(f_i, x_i)` facts as one conjunction.
pub fn query_formula(x: &[Rational]) -> Wff {
    conj(x.iter().enumerate().map(|(i, v)| Wff::atom("Query", vec![idx("f", i), num(v)])).collect())
}

pub fn query_from_formulas(formulas: &[Wff]) -> Result<Vec<Rational>, LearnError> {
    let mut entries = BTreeMap::new();
    for (p, args) in top_atoms(formulas) {
        if let ("Query", [i, v]) = (p.as_str(), args.as_slice()) {
            entries.insert(index_of("f", i)?, value_of(v)?);
        }
    }
    if entries.is_empty() {
        return Err(LearnError::BadState("no `Query` facts".into()));
    }
    dense(entries, "query")
}

/// `Output(o_j, y_j)` facts as one conjunction.
pub fn output_formula(y: &[Rational]) -> Wff {
    conj(y.iter().enumerate().map(|(j, v)| Wff::atom("Output", vec![idx("o", j), num(v)])).collect())
}

/// Gradient learner: learnable when the batch width matches the input layer, every input
/// lies in the activation's domain and the loss is differentiable; learning replaces the
/// model with its one-step update.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToyGradient;

/// The three conjuncts of learnability, reported separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyLearnability {
    pub dimensionality: bool,
    pub activation_feasible: bool,
    pub gradient_exists: bool,
}

impl ToyLearnability {
    pub fn holds(&self) -> bool {
        self.dimensionality && self.activation_feasible && self.gradient_exists
    }
}

impl ToyGradient {
    pub fn assess(&self, x: &[Wff], y: &[Wff]) -> Option<(ToyModelState, ToyBatch, ToyLearnability)> {
        let model = ToyModelState::from_formulas(x).ok()?;
        let (batch, (b, d)) = ToyBatch::from_formulas(y).ok()?;
        let shaped = model.check().is_ok();
        let d_out = model.output_dim();
        let dimensionality = shaped
            && model.input_dim() == Some(d)
            && batch.inputs.len() == b
            && b > 0
            && batch.inputs.iter().all(|r| r.len() == d)
            && batch.targets.len() == b
            && batch.targets.iter().all(|r| Some(r.len()) == d_out);
        let activation_feasible = !model.activations.is_empty()
            && model
                .activations
                .iter()
                .all(|a| batch.inputs.iter().flatten().all(|v| a.accepts(v)));
        let gradient_exists = batch.loss == "quadratic";
        Some((model, batch, ToyLearnability { dimensionality, activation_feasible, gradient_exists }))
    }
}

impl LearnRule for ToyGradient {
    fn name(&self) -> &str {
        "toy_gradient"
    }

    fn learnable(&self, x: &[Wff], y: &[Wff], _budget: &QuantifierBudget) -> Result<bool, LearnError> {
        Ok(self.assess(x, y).is_some_and(|(_, _, l)| l.holds()))
    }

    fn learn(&self, x: &[Wff], y: &[Wff], _budget: &QuantifierBudget) -> Result<Vec<Wff>, LearnError> {
        let (model, batch, l) = self
            .assess(x, y)
            .filter(|(_, _, l)| l.holds())
            .ok_or_else(|| LearnError::BadState("model and batch do not fit".into()))?;
        debug_assert!(l.holds());
        Ok(vec![model.step(&batch).to_formula()])
    }
}

/// Linear predictor: processable when the query width matches the input layer, the
/// activation accepts the query, and an output layer is defined.
#[derive(Debug, Clone, Copy, Default)]
pub struct ToyPredict;

impl ProcessRule for ToyPredict {
    fn name(&self) -> &str {
        "toy_predict"
    }

    fn processable(&self, u: &[Wff], q: &[Wff], _budget: &QuantifierBudget) -> Result<bool, LearnError> {
        let (Ok(model), Ok(x)) = (ToyModelState::from_formulas(u), query_from_formulas(q)) else {
            return Ok(false);
        };
        let input_match = model.input_dim() == Some(x.len());
        let activation_feasible =
            !model.activations.is_empty() && model.activations.iter().all(|a| x.iter().all(|v| a.accepts(v)));
        let output_defined = model.output_dim().is_some() && model.check().is_ok();
        Ok(input_match && activation_feasible && output_defined)
    }

    fn process(&self, u: &[Wff], q: &[Wff], _budget: &QuantifierBudget) -> Result<Vec<Wff>, LearnError> {
        let model = ToyModelState::from_formulas(u)?;
        let x = query_from_formulas(q)?;
        Ok(vec![output_formula(&model.predict(&x))])
    }
}
