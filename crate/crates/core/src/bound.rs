//! Generalization bound from state coverage: the conservative model distribution, KL
//! divergence, the Pinsker bound on it and an independent total-variation oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::learn::{value_to_rational, Rational};

/// Slack allowed on the mass sum of float distributions and on a negative radicand.
pub const TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("supports differ: {0}")]
    SupportMismatch(String),
    #[error("`{0}` has positive mass where the second distribution has none")]
    InfiniteDivergence(String),
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error("radicand {0} is negative")]
    NegativeRadicand(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LogBase {
    #[default]
    Natural,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Natural => x.ln(),
            LogBase::Two => x.log2(),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "e" | "natural" | "ln" => Some(LogBase::Natural),
            "2" | "two" | "bits" => Some(LogBase::Two),
            _ => None,
        }
    }
}

/// `x * log(x)`, with `0 log 0 = 0`.
fn xlogx(x: f64, base: LogBase) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * base.log(x)
    }
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A probability distribution over finitely many labels. Exact distributions keep rational
/// masses summing to exactly one; float ones keep `f64` masses summing to one within
/// [`TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDistribution {
    labels: Vec<String>,
    float: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

fn check_labels(labels: &[String]) -> Result<(), BoundError> {
    let mut seen = BTreeSet::new();
    if let Some(dup) = labels.iter().find(|l| !seen.insert(*l)) {
        return Err(BoundError::BadDistribution(format!("`{dup}` listed twice")));
    }
    Ok(())
}

impl FiniteDistribution {
    pub fn exact(pairs: Vec<(String, Rational)>) -> Result<Self, BoundError> {
        let (labels, mass): (Vec<String>, Vec<Rational>) = pairs.into_iter().unzip();
        check_labels(&labels)?;
        if let Some(i) = mass.iter().position(Signed::is_negative) {
            return Err(BoundError::BadDistribution(format!("`{}` has negative mass", labels[i])));
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(BoundError::BadDistribution(format!("masses sum to {total}")));
        }
        Ok(FiniteDistribution { float: mass.iter().map(to_f64).collect(), labels, exact: Some(mass) })
    }

    pub fn float(pairs: Vec<(String, f64)>) -> Result<Self, BoundError> {
        let (labels, mass): (Vec<String>, Vec<f64>) = pairs.into_iter().unzip();
        check_labels(&labels)?;
        if let Some(i) = mass.iter().position(|m| !m.is_finite() || *m < 0.0) {
            return Err(BoundError::BadDistribution(format!("`{}` has mass {}", labels[i], mass[i])));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > TOLERANCE {
            return Err(BoundError::BadDistribution(format!("masses sum to {total}")));
        }
        Ok(FiniteDistribution { labels, float: mass, exact: None })
    }

    /// `{"support": [...], "mass": {"s1": 0.4, ...}}`; support labels without a mass get 0.
    /// Exact reading takes decimal or fraction text at face value.
    pub fn from_json_value(v: &Value, exact: bool) -> Result<Self, BoundError> {
        let bad = |m: &str| BoundError::BadDistribution(m.to_string());
        let support: Vec<String> = v
            .get("support")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `support` list"))?
            .iter()
            .map(|s| s.as_str().map(str::to_string).ok_or_else(|| bad("support labels must be strings")))
            .collect::<Result<_, _>>()?;
        let mass = v.get("mass").and_then(Value::as_object).ok_or_else(|| bad("missing `mass` object"))?;
        if let Some(extra) = v.as_object().and_then(|o| o.keys().find(|k| *k != "support" && *k != "mass")) {
            return Err(bad(&format!("unknown field `{extra}`")));
        }
        if let Some(k) = mass.keys().find(|k| !support.contains(k)) {
            return Err(BoundError::SupportMismatch(format!("`{k}` has mass but is not in the support")));
        }
        if exact {
            let pairs = support
                .iter()
                .map(|l| {
                    let m = match mass.get(l) {
                        None => Rational::zero(),
                        Some(x) => value_to_rational(x).ok_or_else(|| bad(&format!("mass of `{l}` is not a number")))?,
                    };
                    Ok((l.clone(), m))
                })
                .collect::<Result<_, BoundError>>()?;
            FiniteDistribution::exact(pairs)
        } else {
            let pairs = support
                .iter()
                .map(|l| {
                    let m = match mass.get(l) {
                        None => 0.0,
                        Some(x) => x.as_f64().ok_or_else(|| bad(&format!("mass of `{l}` is not a number")))?,
                    };
                    Ok((l.clone(), m))
                })
                .collect::<Result<_, BoundError>>()?;
            FiniteDistribution::float(pairs)
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    fn index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn mass(&self, label: &str) -> Option<f64> {
        self.index(label).map(|i| self.float[i])
    }

    pub fn exact_mass(&self, label: &str) -> Option<&Rational> {
        let i = self.index(label)?;
        self.exact.as_ref().map(|m| &m[i])
    }

    pub fn support_set(&self) -> BTreeSet<&str> {
        self.labels.iter().map(String::as_str).collect()
    }

    pub fn to_json_value(&self) -> Value {
        let mass: serde_json::Map<String, Value> = match &self.exact {
            Some(exact) => self
                .labels
                .iter()
                .zip(exact)
                .map(|(l, m)| (l.clone(), Value::String(m.to_string())))
                .collect(),
            None => self.labels.iter().zip(&self.float).map(|(l, m)| (l.clone(), serde_json::json!(m))).collect(),
        };
        serde_json::json!({"support": self.labels, "mass": mass})
    }
}

fn same_support(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<(), BoundError> {
    if p.support_set() != q.support_set() {
        return Err(BoundError::SupportMismatch("the two distributions have different supports".into()));
    }
    Ok(())
}

/// How the query states sit relative to the states the model carries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapStats {
    pub n_q: usize,
    pub n_overlap: usize,
    /// Query mass on states the model carries.
    pub p_overlap: f64,
    #[serde(skip_serializing_if = "Option::is_none", serialize_with = "ser_rational")]
    pub p_overlap_exact: Option<Rational>,
    /// `-sum p log p` over the query states the model lacks, masses left unnormalized.
    pub h_nonoverlap: f64,
    pub overlap: Vec<String>,
    pub nonoverlap: Vec<String>,
}

fn ser_rational<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub fn overlap_stats(
    s_ou: &[String],
    s_oq: &[String],
    p_q: &FiniteDistribution,
    base: LogBase,
) -> Result<OverlapStats, BoundError> {
    let q: BTreeSet<&str> = s_oq.iter().map(String::as_str).collect();
    if q.len() != s_oq.len() {
        return Err(BoundError::BadDistribution("query state list repeats a label".into()));
    }
    if q != p_q.support_set() {
        return Err(BoundError::SupportMismatch("query distribution support differs from the query states".into()));
    }
    let u: BTreeSet<&str> = s_ou.iter().map(String::as_str).collect();
    let (overlap, nonoverlap): (Vec<String>, Vec<String>) =
        p_q.labels().iter().cloned().partition(|l| u.contains(l.as_str()));
    let p_overlap_exact = p_q
        .exact
        .as_ref()
        .map(|_| overlap.iter().map(|l| p_q.exact_mass(l).unwrap().clone()).sum::<Rational>());
    let p_overlap = match &p_overlap_exact {
        Some(r) => to_f64(r),
        None => overlap.iter().map(|l| p_q.mass(l).unwrap()).sum(),
    };
    let h_nonoverlap = -nonoverlap.iter().map(|l| xlogx(p_q.mass(l).unwrap(), base)).sum::<f64>();
    Ok(OverlapStats {
        n_q: s_oq.len(),
        n_overlap: overlap.len(),
        p_overlap,
        p_overlap_exact,
        h_nonoverlap,
        overlap,
        nonoverlap,
    })
}

/// The query mass where the model carries the state, and the leftover mass spread evenly
/// over the states it lacks.
pub fn build_model_distribution(
    s_ou: &[String],
    s_oq: &[String],
    p_q: &FiniteDistribution,
) -> Result<FiniteDistribution, BoundError> {
    let stats = overlap_stats(s_ou, s_oq, p_q, LogBase::Natural)?;
    if stats.nonoverlap.is_empty() {
        return Ok(p_q.clone());
    }
    let gap = stats.n_q - stats.n_overlap;
    let on_overlap = |l: &String| stats.overlap.contains(l);
    match &stats.p_overlap_exact {
        Some(p) => {
            let share = (Rational::one() - p) / Rational::from_integer(gap.into());
            let pairs = p_q
                .labels()
                .iter()
                .map(|l| {
                    let m = if on_overlap(l) { p_q.exact_mass(l).unwrap().clone() } else { share.clone() };
                    (l.clone(), m)
                })
                .collect();
            FiniteDistribution::exact(pairs)
        }
        None => {
            let share = ((1.0 - stats.p_overlap) / gap as f64).max(0.0);
            let pairs = p_q
                .labels()
                .iter()
                .map(|l| (l.clone(), if on_overlap(l) { p_q.mass(l).unwrap() } else { share }))
                .collect();
            FiniteDistribution::float(pairs)
        }
    }
}

/// `sum p log(p / q)`; zero-mass terms of `p` contribute nothing.
pub fn kl_divergence(p: &FiniteDistribution, q: &FiniteDistribution, base: LogBase) -> Result<f64, BoundError> {
    same_support(p, q)?;
    let mut total = 0.0;
    for l in p.labels() {
        let (pm, qm) = (p.mass(l).unwrap(), q.mass(l).unwrap());
        if pm == 0.0 && p.exact_mass(l).is_none_or(Zero::is_zero) {
            continue;
        }
        if qm == 0.0 && q.exact_mass(l).is_none_or(Zero::is_zero) {
            return Err(BoundError::InfiniteDivergence(l.clone()));
        }
        let ratio = match (p.exact_mass(l), q.exact_mass(l)) {
            (Some(a), Some(b)) => to_f64(&(a / b)),
            _ => pm / qm,
        };
        total += pm * base.log(ratio);
    }
    Ok(total)
}

/// Half the L1 distance, in `f64`.
pub fn tvd_oracle(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<f64, BoundError> {
    same_support(p, q)?;
    if let Some(exact) = tvd_exact(p, q)? {
        return Ok(to_f64(&exact));
    }
    Ok(0.5 * p.labels().iter().map(|l| (p.mass(l).unwrap() - q.mass(l).unwrap()).abs()).sum::<f64>())
}

/// Half the L1 distance, exactly, when both distributions are exact.
pub fn tvd_exact(p: &FiniteDistribution, q: &FiniteDistribution) -> Result<Option<Rational>, BoundError> {
    same_support(p, q)?;
    if !(p.is_exact() && q.is_exact()) {
        return Ok(None);
    }
    let sum: Rational = p
        .labels()
        .iter()
        .map(|l| (p.exact_mass(l).unwrap() - q.exact_mass(l).unwrap()).abs())
        .sum();
    Ok(Some(sum / Rational::from_integer(2.into())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundBranch {
    Subset,
    Pinsker,
}

#[derive(Debug, Clone, Default)]
pub struct BoundOptions {
    pub base: LogBase,
    /// A model distribution whose overlap masses replace the query's, adding the true overlap
    /// divergence term instead of taking it as zero.
    pub strict_model: Option<FiniteDistribution>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundComponents {
    #[serde(flatten)]
    pub stats: OverlapStats,
    /// `(1 - P) log((n_q - n_overlap) / (1 - P))`, 0 when `1 - P` is 0.
    pub coverage_term: f64,
    /// Divergence on the states the model lacks: `coverage_term - h_nonoverlap`.
    pub nonoverlap_kl: f64,
    pub overlap_kl: f64,
    /// Half the total divergence, not clamped.
    pub radicand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub branch: BoundBranch,
    pub log_base: LogBase,
    pub components: BoundComponents,
}

pub fn generalization_bound(
    s_ou: &[String],
    s_oq: &[String],
    p_q: &FiniteDistribution,
    options: &BoundOptions,
) -> Result<BoundReport, BoundError> {
    let base = options.base;
    let stats = overlap_stats(s_ou, s_oq, p_q, base)?;
    let rest = match &stats.p_overlap_exact {
        Some(p) => to_f64(&(Rational::one() - p)),
        None => 1.0 - stats.p_overlap,
    };
    let gap = stats.n_q - stats.n_overlap;
    let coverage_term = if gap == 0 || rest <= 0.0 { 0.0 } else { rest * base.log(gap as f64 / rest) };
    let nonoverlap_kl = coverage_term - stats.h_nonoverlap;
    let overlap_kl = match &options.strict_model {
        None => 0.0,
        Some(model) => {
            same_support(p_q, model)?;
            let mut total = 0.0;
            for l in &stats.overlap {
                let (pm, mm) = (p_q.mass(l).unwrap(), model.mass(l).unwrap());
                if pm == 0.0 {
                    continue;
                }
                if mm == 0.0 {
                    return Err(BoundError::InfiniteDivergence(l.clone()));
                }
                total += pm * base.log(pm / mm);
            }
            total
        }
    };
    let branch = if gap == 0 { BoundBranch::Subset } else { BoundBranch::Pinsker };
    let radicand = if branch == BoundBranch::Subset && options.strict_model.is_none() {
        0.0
    } else {
        0.5 * (overlap_kl + nonoverlap_kl)
    };
    if radicand < -TOLERANCE {
        return Err(BoundError::NegativeRadicand(format!("{radicand:e}")));
    }
    let bound = if branch == BoundBranch::Subset && options.strict_model.is_none() {
        0.0
    } else {
        radicand.max(0.0).sqrt()
    };
    Ok(BoundReport {
        bound,
        branch,
        log_base: base,
        components: BoundComponents { stats, coverage_term, nonoverlap_kl, overlap_kl, radicand },
    })
}

/// A random exact instance: query states `s1..sn` (`n <= max_n`) with integer-weight masses,
/// some of them zero, and model states covering a random part of them plus states of its own.
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, max_n: usize) -> (Vec<String>, Vec<String>, FiniteDistribution) {
    let n = rng.random_range(1..=max_n);
    let s_oq: Vec<String> = (1..=n).map(|i| format!("s{i}")).collect();
    let mut weights: Vec<u32> = (0..n).map(|_| if rng.random_bool(0.15) { 0 } else { rng.random_range(1..=20) }).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[0] = 1;
    }
    let total: u32 = weights.iter().sum();
    let p_q = FiniteDistribution::exact(
        s_oq.iter()
            .zip(&weights)
            .map(|(l, &w)| (l.clone(), Rational::new(w.into(), total.into())))
            .collect(),
    )
    .expect("weights are normalized");
    let mut s_ou: Vec<String> = s_oq.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
    s_ou.extend((0..rng.random_range(0..3)).map(|i| format!("m{i}")));
    (s_ou, s_oq, p_q)
}

/// Label lists as owned strings.
pub fn labels(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Masses keyed by label, for reports.
pub fn mass_map(d: &FiniteDistribution) -> BTreeMap<String, f64> {
    d.labels().iter().map(|l| (l.clone(), d.mass(l).unwrap())).collect()
}
