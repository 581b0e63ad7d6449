//! Ethical safety of formula sets, the violation hypergraph, maximum safe subsets and the
//! safeguard that routes rejected outputs to a safety prompt.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::info::StateSet;
use crate::logic::{format_formula, parse_formula, Binder, ParseError, Signature, SignatureError, Term, Wff};
use crate::model::{default_domain_size, entails, find_model, relevant_premises, ModelError, QuantifierBudget};

/// Largest vertex count the exact solver accepts.
pub const EXACT_LIMIT: usize = 25;
pub const DEFAULT_K_MAX: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EthicsError {
    #[error("bad constraint: {0}")]
    BadConstraint(String),
    #[error("no grounding for ({object}, {time})")]
    MissingGrounding { object: String, time: String },
    #[error("two output formulas are named `{0}`")]
    DuplicateName(String),
    #[error("{vertices} formulas exceed the exact solver's limit of {limit}")]
    TooLargeForExact { vertices: usize, limit: usize },
    #[error("the empty set already violates the constraint at ({object}, {time})")]
    ConstraintAlwaysViolated { object: String, time: String },
    #[error("k_max must be at least 1")]
    BadKMax,
    #[error("malformed input: {0}")]
    Json(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl EthicsError {
    pub fn is_budget(&self) -> bool {
        matches!(self, EthicsError::Model(e) if e.is_budget())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveMode {
    Exact,
    Greedy,
}

/// A template with free variables and, per (object, time), the constants substituted for them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EthicalConstraint {
    template: Wff,
    variables: Vec<String>,
    grounding: Vec<(String, String, Vec<String>)>,
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl EthicalConstraint {
    pub fn new(
        template: Wff,
        variables: Vec<String>,
        grounding: Vec<(String, String, Vec<String>)>,
    ) -> Result<Self, EthicsError> {
        let free = template.free_vars();
        let declared: BTreeSet<String> = variables.iter().cloned().collect();
        if declared.len() != variables.len() {
            return Err(EthicsError::BadConstraint("a variable is listed twice".into()));
        }
        if free != declared {
            return Err(EthicsError::BadConstraint(format!(
                "free variables {{{}}} differ from declared {{{}}}",
                free.into_iter().collect::<Vec<_>>().join(", "),
                variables.join(", ")
            )));
        }
        if grounding.is_empty() {
            return Err(EthicsError::BadConstraint("grounding table is empty".into()));
        }
        let mut keys = BTreeSet::new();
        for (x, t, values) in &grounding {
            if !keys.insert((x, t)) {
                return Err(EthicsError::BadConstraint(format!("({x}, {t}) is grounded twice")));
            }
            if values.len() != variables.len() {
                return Err(EthicsError::BadConstraint(format!(
                    "({x}, {t}) gives {} values for {} variables",
                    values.len(),
                    variables.len()
                )));
            }
            if let Some(v) = values.iter().find(|v| !is_name(v)) {
                return Err(EthicsError::BadConstraint(format!("`{v}` is not a constant name")));
            }
        }
        Ok(EthicalConstraint { template, variables, grounding })
    }

    /// `{"template": "...", "variables": [...], "grounding": {"x,t": [...]}}`.
    pub fn from_json_value(v: &Value, sig: &Signature) -> Result<Self, EthicsError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            template: String,
            variables: Vec<String>,
            grounding: BTreeMap<String, Vec<String>>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| EthicsError::Json(e.to_string()))?;
        let template = parse_formula(&raw.template, sig)?;
        let grounding = raw
            .grounding
            .into_iter()
            .map(|(k, vals)| {
                let (x, t) = k
                    .split_once(',')
                    .ok_or_else(|| EthicsError::Json(format!("grounding key `{k}` is not `object,time`")))?;
                Ok((x.trim().to_string(), t.trim().to_string(), vals))
            })
            .collect::<Result<Vec<_>, EthicsError>>()?;
        EthicalConstraint::new(template, raw.variables, grounding)
    }

    pub fn template(&self) -> &Wff {
        &self.template
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn grounding(&self) -> &[(String, String, Vec<String>)] {
        &self.grounding
    }

    /// The template with the values for `(x, t)` substituted.
    pub fn instance_at(&self, i: usize) -> Wff {
        let (_, _, values) = &self.grounding[i];
        let map: BTreeMap<String, Term> = self
            .variables
            .iter()
            .zip(values)
            .map(|(v, c)| (v.clone(), Term::cst(c)))
            .collect();
        self.template.substitute(&map)
    }

    pub fn instance(&self, object: &str, time: &str) -> Option<Wff> {
        self.grounding
            .iter()
            .position(|(x, t, _)| x == object && t == time)
            .map(|i| self.instance_at(i))
    }

    /// `sig` extended with the grounding values and the template's own symbols.
    pub fn extend_signature(&self, sig: &Signature) -> Result<Signature, EthicsError> {
        let mut out = sig.merge(&Signature::infer([&self.template])?)?;
        for (_, _, values) in &self.grounding {
            for v in values {
                if !out.contains(v) {
                    out.add_constant(v.clone())?;
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub object: String,
    pub time: String,
    /// The violated instance of the constraint.
    pub instance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum SafetyVerdict {
    Safe,
    /// `core` indexes the checked formulas; it entails the negated instance and no member can
    /// be dropped.
    Unsafe { witness: Witness, core: Vec<usize> },
}

impl SafetyVerdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, SafetyVerdict::Safe)
    }
}

/// Entailment of negated constraint instances over one signature and domain size.
struct Oracle<'a> {
    ec: &'a EthicalConstraint,
    negated: Vec<Wff>,
    sig: Signature,
    size: usize,
    budget: &'a QuantifierBudget,
}

impl<'a> Oracle<'a> {
    fn new(
        formulas: &[Wff],
        ec: &'a EthicalConstraint,
        sig: &Signature,
        budget: &'a QuantifierBudget,
    ) -> Result<Self, EthicsError> {
        let sig = ec.extend_signature(&sig.merge(&Signature::infer(formulas)?)?)?;
        let negated: Vec<Wff> = (0..ec.grounding.len()).map(|i| Wff::not(ec.instance_at(i))).collect();
        let mut all = formulas.to_vec();
        all.extend(negated.iter().cloned());
        let size = default_domain_size(&sig, &all);
        Ok(Oracle { ec, negated, sig, size, budget })
    }

    fn witness(&self, i: usize) -> Witness {
        let (x, t, _) = &self.ec.grounding[i];
        Witness {
            object: x.clone(),
            time: t.clone(),
            instance: format_formula(&self.ec.instance_at(i)),
        }
    }

    /// Whether `premises` entail the negation of instance `i`. Premises that share no
    /// symbol with the goal only matter when they are unsatisfiable on their own.
    fn violates(&self, premises: &[Wff], i: usize) -> Result<bool, EthicsError> {
        let goal = &self.negated[i];
        let rel = relevant_premises(premises, goal);
        let chosen: Vec<Wff> = rel.iter().map(|&k| premises[k].clone()).collect();
        if entails(&chosen, goal, &self.sig, self.size, self.budget)? {
            return Ok(true);
        }
        let rest: Vec<Wff> = (0..premises.len())
            .filter(|k| !rel.contains(k))
            .map(|k| premises[k].clone())
            .collect();
        Ok(!rest.is_empty() && find_model(&rest, &self.sig, self.size, self.budget)?.is_none())
    }

    fn first_violation(&self, premises: &[Wff]) -> Result<Option<usize>, EthicsError> {
        for i in 0..self.negated.len() {
            if self.violates(premises, i)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Deletion-minimal subset of `premises` (as indices) still violating instance `i`.
    fn core(&self, premises: &[Wff], i: usize) -> Result<Vec<usize>, EthicsError> {
        let mut core: Vec<usize> = (0..premises.len()).collect();
        let mut k = 0;
        while k < core.len() {
            let mut without = core.clone();
            without.remove(k);
            let fs: Vec<Wff> = without.iter().map(|&j| premises[j].clone()).collect();
            if self.violates(&fs, i)? {
                core = without;
            } else {
                k += 1;
            }
        }
        Ok(core)
    }

    fn check(&self, premises: &[Wff]) -> Result<SafetyVerdict, EthicsError> {
        match self.first_violation(premises)? {
            None => Ok(SafetyVerdict::Safe),
            Some(i) => Ok(SafetyVerdict::Unsafe { witness: self.witness(i), core: self.core(premises, i)? }),
        }
    }
}

/// Safe when no grounded instance of the constraint has its negation entailed.
pub fn check_ethical_safety(
    formulas: &[Wff],
    ec: &EthicalConstraint,
    sig: &Signature,
    budget: &QuantifierBudget,
) -> Result<SafetyVerdict, EthicsError> {
    Oracle::new(formulas, ec, sig, budget)?.check(formulas)
}

/// [`check_ethical_safety`] on a state set, whose every (object, time) pair must be grounded.
pub fn check_state_safety(
    s: &StateSet,
    ec: &EthicalConstraint,
    budget: &QuantifierBudget,
) -> Result<SafetyVerdict, EthicsError> {
    for x in s.objects() {
        for t in s.times() {
            if ec.instance(x, t).is_none() {
                return Err(EthicsError::MissingGrounding { object: x.clone(), time: t.clone() });
            }
        }
    }
    check_ethical_safety(s.formulas(), ec, s.signature(), budget)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Wff,
}

/// A list of named output formulas with its signature:
/// `{"signature": {...} | "path", "formulas": [{"name": "p1", "formula": "..."} | "text"]}`.
/// Unnamed formulas are named by their text.
pub fn named_formulas_from_json(v: &Value, base: &Path) -> Result<(Signature, Vec<NamedFormula>), EthicsError> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Item {
        Named { name: String, formula: String },
        Plain(String),
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        signature: Value,
        formulas: Vec<Item>,
    }
    let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| EthicsError::Json(e.to_string()))?;
    let sig_value = match raw.signature {
        Value::String(p) => {
            let path = base.join(p);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| EthicsError::Json(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| EthicsError::Json(e.to_string()))?
        }
        other => other,
    };
    let sig = Signature::from_json_value(&sig_value)?;
    let formulas = raw
        .formulas
        .into_iter()
        .map(|item| {
            let (name, text) = match item {
                Item::Named { name, formula } => (name, formula),
                Item::Plain(text) => (text.clone(), text),
            };
            Ok(NamedFormula { formula: parse_formula(&text, &sig)?, name })
        })
        .collect::<Result<Vec<_>, EthicsError>>()?;
    Ok((sig, formulas))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hyperedge {
    /// Vertex indices, ascending.
    pub members: Vec<usize>,
    pub witness: Witness,
}

/// Vertices are the output formulas; each hyperedge is a subset whose conjunction entails a
/// negated constraint instance while none of its proper subsets violates anything.
#[derive(Debug, Clone, PartialEq)]
pub struct ViolationHypergraph {
    pub vertices: Vec<NamedFormula>,
    pub edges: Vec<Hyperedge>,
    pub k_max: usize,
    /// Whether every minimal violating subset is known to be listed (`k_max` covers all sizes).
    pub complete: bool,
    constraint: EthicalConstraint,
    signature: Signature,
}

fn check_names(vertices: &[NamedFormula]) -> Result<(), EthicsError> {
    let mut seen = BTreeSet::new();
    for v in vertices {
        if !seen.insert(&v.name) {
            return Err(EthicsError::DuplicateName(v.name.clone()));
        }
    }
    Ok(())
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, f: &mut impl FnMut(&[usize]) -> Result<(), EthicsError>) -> Result<(), EthicsError> {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return Ok(());
    }
    loop {
        f(&idx)?;
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return Ok(()) };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn build_violation_hypergraph(
    vertices: Vec<NamedFormula>,
    ec: &EthicalConstraint,
    sig: &Signature,
    k_max: usize,
    budget: &QuantifierBudget,
) -> Result<ViolationHypergraph, EthicsError> {
    if k_max == 0 {
        return Err(EthicsError::BadKMax);
    }
    check_names(&vertices)?;
    let formulas: Vec<Wff> = vertices.iter().map(|v| v.formula.clone()).collect();
    let oracle = Oracle::new(&formulas, ec, sig, budget)?;
    if let Some(i) = oracle.first_violation(&[])? {
        let w = oracle.witness(i);
        return Err(EthicsError::ConstraintAlwaysViolated { object: w.object, time: w.time });
    }
    let n = vertices.len();
    let mut edges: Vec<Hyperedge> = Vec::new();
    for k in 1..=k_max.min(n) {
        let mut found = Vec::new();
        for_each_subset(n, k, &mut |subset| {
            if edges.iter().any(|e| e.members.iter().all(|m| subset.contains(m))) {
                return Ok(());
            }
            let fs: Vec<Wff> = subset.iter().map(|&i| formulas[i].clone()).collect();
            if let Some(i) = oracle.first_violation(&fs)? {
                found.push(Hyperedge { members: subset.to_vec(), witness: oracle.witness(i) });
            }
            Ok(())
        })?;
        edges.extend(found);
    }
    Ok(ViolationHypergraph {
        complete: k_max >= n,
        signature: oracle.sig.clone(),
        vertices,
        edges,
        k_max,
        constraint: ec.clone(),
    })
}

impl ViolationHypergraph {
    pub fn constraint(&self) -> &EthicalConstraint {
        &self.constraint
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn formulas(&self, members: &[usize]) -> Vec<Wff> {
        members.iter().map(|&i| self.vertices[i].formula.clone()).collect()
    }

    pub fn names(&self, members: &[usize]) -> Vec<String> {
        members.iter().map(|&i| self.vertices[i].name.clone()).collect()
    }

    /// Whether `members` contains no hyperedge.
    pub fn is_independent(&self, members: &[usize]) -> bool {
        !self.edges.iter().any(|e| e.members.iter().all(|m| members.contains(m)))
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::json!({
            "vertices": self.vertices.iter().map(|v| serde_json::json!({
                "name": v.name,
                "formula": format_formula(&v.formula),
            })).collect::<Vec<_>>(),
            "hyperedges": self.edges.iter().map(|e| serde_json::json!({
                "members": self.names(&e.members),
                "witness": e.witness,
            })).collect::<Vec<_>>(),
            "k_max": self.k_max,
            "complete": self.complete,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SafeSubset {
    /// Vertex indices, ascending.
    pub members: Vec<usize>,
    pub names: Vec<String>,
    /// Violations beyond `k_max` found while re-checking candidates, as extra hyperedges.
    pub added_edges: Vec<Hyperedge>,
}

/// Vertex positions sorted by name, so that bit `i` of a mask is the `i`-th name.
fn name_order(h: &ViolationHypergraph) -> Vec<usize> {
    let mut order: Vec<usize> = (0..h.vertices.len()).collect();
    order.sort_by(|&a, &b| h.vertices[a].name.cmp(&h.vertices[b].name));
    order
}

fn edge_mask(members: &[usize], pos: &[usize]) -> u32 {
    members.iter().fold(0, |m, &v| m | 1 << pos[v])
}

/// Largest independent set; among those, the one whose name sequence is smallest. Including
/// a vertex is tried before excluding it, so the first maximum reached wins ties.
fn exact_mask(n: usize, edges: &[u32]) -> u32 {
    let by_vertex: Vec<Vec<u32>> = (0..n)
        .map(|i| edges.iter().copied().filter(|e| e & 1 << i != 0).collect())
        .collect();
    struct Search<'a> {
        n: usize,
        by_vertex: &'a [Vec<u32>],
        best: Option<(u32, usize)>,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, cur: u32, size: usize) {
            if self.best.is_some_and(|(_, b)| size + (self.n - i) <= b) {
                return;
            }
            if i == self.n {
                self.best = Some((cur, size));
                return;
            }
            let with = cur | 1 << i;
            if self.by_vertex[i].iter().all(|&e| with & e != e) {
                self.go(i + 1, with, size + 1);
            }
            self.go(i + 1, cur, size);
        }
    }
    let mut s = Search { n, by_vertex: &by_vertex, best: None };
    s.go(0, 0, 0);
    s.best.map_or(0, |(m, _)| m)
}

/// Drops the vertex in the most contained hyperedges (lowest position on ties) until none is
/// contained.
fn greedy_mask(n: usize, edges: &[u32]) -> u32 {
    let mut cur: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    loop {
        let active: Vec<u32> = edges.iter().copied().filter(|&e| cur & e == e).collect();
        if active.is_empty() {
            return cur;
        }
        let count = |i: usize| active.iter().filter(|&&e| e & 1 << i != 0).count();
        let drop = (0..n)
            .filter(|&i| cur & 1 << i != 0)
            .max_by_key(|&i| (count(i), std::cmp::Reverse(i)))
            .expect("an active edge has members");
        cur &= !(1 << drop);
    }
}

/// A maximum (exact) or greedily maximal (greedy) independent set, re-checked for safety.
/// When a candidate fails the check, its violating core joins the hyperedges and the search
/// repeats, so the answer never depends on `k_max`.
pub fn max_safe_subset(
    h: &ViolationHypergraph,
    mode: SolveMode,
    budget: &QuantifierBudget,
) -> Result<SafeSubset, EthicsError> {
    let n = h.vertices.len();
    if mode == SolveMode::Exact && n > EXACT_LIMIT {
        return Err(EthicsError::TooLargeForExact { vertices: n, limit: EXACT_LIMIT });
    }
    if n > 32 {
        return Err(EthicsError::TooLargeForExact { vertices: n, limit: 32 });
    }
    let order = name_order(h);
    let mut pos = vec![0; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v] = p;
    }
    let all: Vec<Wff> = h.vertices.iter().map(|v| v.formula.clone()).collect();
    let oracle = Oracle::new(&all, &h.constraint, &h.signature, budget)?;
    let mut edges: Vec<u32> = h.edges.iter().map(|e| edge_mask(&e.members, &pos)).collect();
    let mut added = Vec::new();
    loop {
        let mask = match mode {
            SolveMode::Exact => exact_mask(n, &edges),
            SolveMode::Greedy => greedy_mask(n, &edges),
        };
        let mut members: Vec<usize> = (0..n).filter(|&p| mask & 1 << p != 0).map(|p| order[p]).collect();
        members.sort_unstable();
        match oracle.check(&h.formulas(&members))? {
            SafetyVerdict::Safe => {
                return Ok(SafeSubset { names: h.names(&members), members, added_edges: added });
            }
            SafetyVerdict::Unsafe { witness, core } => {
                let core: Vec<usize> = core.iter().map(|&k| members[k]).collect();
                edges.push(edge_mask(&core, &pos));
                added.push(Hyperedge { members: core, witness });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SafeguardResult {
    pub hypergraph: ViolationHypergraph,
    pub safe: SafeSubset,
    /// Vertex indices not kept, ascending.
    pub rejected: Vec<usize>,
    pub prompt_constant: String,
    pub prompt_predicate: String,
    pub safeguard_formula: Wff,
    /// The kept formulas followed by the prompt atom.
    pub augmented_output: Vec<Wff>,
    /// Input signature plus the prompt symbols and set constants.
    pub signature: Signature,
    pub augmented_verdict: SafetyVerdict,
}

impl SafeguardResult {
    /// The prompt atom, e.g. `IsSafeback(NEc)`.
    pub fn prompt(&self) -> Wff {
        Wff::atom(self.prompt_predicate.clone(), vec![Term::cst(&self.prompt_constant)])
    }

    /// What the guarded model emits in place of vertex `i`.
    pub fn route(&self, i: usize) -> Wff {
        if self.safe.members.contains(&i) {
            self.hypergraph.vertices[i].formula.clone()
        } else {
            self.prompt()
        }
    }
}

/// Names the safeguard formula uses for the output sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SafeguardNames {
    pub output: String,
    pub safe: String,
    pub rejected: String,
    pub guarded: String,
    pub prompt_constant: String,
    pub prompt_predicate: String,
}

impl SafeguardNames {
    /// Fresh names with respect to `sig`.
    pub fn fresh(sig: &Signature) -> Self {
        let mut taken = sig.clone();
        let mut pick = |base: &str, predicate: bool| {
            let name = taken.fresh_name(base);
            let _ = if predicate { taken.add_predicate(name.clone(), 1) } else { taken.add_constant(name.clone()) };
            name
        };
        SafeguardNames {
            output: pick("S_or", false),
            safe: pick("S_or_Ec", false),
            rejected: pick("S_or_nEc", false),
            guarded: pick("S_os", false),
            prompt_constant: pick("NEc", false),
            prompt_predicate: pick("IsSafeback", true),
        }
    }
}

/// `forall phi_r. IsFormulaOf(phi_r, S_or) -> exists phi_s. IsFormulaOf(phi_s, S_os)
///  & (IsFormulaOf(phi_r, S_or_Ec) -> Eq(phi_s, phi_r))
///  & (IsFormulaOf(phi_r, S_or_nEc) -> Eq(phi_s, IsSafeback(NEc)))`.
pub fn safeguard_formula(names: &SafeguardNames) -> Wff {
    let r = Term::var("phi_r");
    let s = Term::var("phi_s");
    let member = |x: &Term, set: &str| Wff::atom("IsFormulaOf", vec![x.clone(), Term::cst(set)]);
    let prompt = Term::pred(names.prompt_predicate.clone(), vec![Term::cst(&names.prompt_constant)]);
    Wff::forall(
        Binder::var("phi_r"),
        Wff::implies(
            member(&r, &names.output),
            Wff::exists(
                Binder::var("phi_s"),
                Wff::and(
                    Wff::and(
                        member(&s, &names.guarded),
                        Wff::implies(member(&r, &names.safe), Wff::atom("Eq", vec![s.clone(), r.clone()])),
                    ),
                    Wff::implies(member(&r, &names.rejected), Wff::atom("Eq", vec![s, prompt])),
                ),
            ),
        ),
    )
}

pub fn inject_safeguard(
    outputs: Vec<NamedFormula>,
    ec: &EthicalConstraint,
    sig: &Signature,
    mode: SolveMode,
    k_max: usize,
    budget: &QuantifierBudget,
) -> Result<SafeguardResult, EthicsError> {
    let hypergraph = build_violation_hypergraph(outputs, ec, sig, k_max, budget)?;
    let safe = max_safe_subset(&hypergraph, mode, budget)?;
    let rejected: Vec<usize> = (0..hypergraph.vertices.len()).filter(|i| !safe.members.contains(i)).collect();
    let names = SafeguardNames::fresh(hypergraph.signature());
    let mut signature = hypergraph.signature().clone();
    for c in [&names.output, &names.safe, &names.rejected, &names.guarded, &names.prompt_constant] {
        signature.add_constant(c.clone())?;
    }
    signature.add_predicate(names.prompt_predicate.clone(), 1)?;
    let prompt = Wff::atom(names.prompt_predicate.clone(), vec![Term::cst(&names.prompt_constant)]);
    let mut augmented_output = hypergraph.formulas(&safe.members);
    augmented_output.push(prompt);
    let augmented_verdict = check_ethical_safety(&augmented_output, ec, &signature, budget)?;
    Ok(SafeguardResult {
        safeguard_formula: safeguard_formula(&names),
        prompt_constant: names.prompt_constant,
        prompt_predicate: names.prompt_predicate,
        hypergraph,
        safe,
        rejected,
        augmented_output,
        signature,
        augmented_verdict,
    })
}

fn random_wff<R: Rng + ?Sized>(rng: &mut R, atoms: &[Wff], depth: usize) -> Wff {
    if depth == 0 || rng.random_bool(0.35) {
        let a = atoms.choose(rng).expect("atoms").clone();
        return if rng.random_bool(0.3) { Wff::not(a) } else { a };
    }
    let l = random_wff(rng, atoms, depth - 1);
    let r = random_wff(rng, atoms, depth - 1);
    match rng.random_range(0..4) {
        0 => Wff::and(l, r),
        1 => Wff::or(l, r),
        2 => Wff::implies(l, r),
        _ => Wff::not(l),
    }
}

/// A random instance over `A`, `B`, `C` and `P(a)`, `P(b)`: up to `max_vertices` output
/// formulas `p1, p2, ...` and a constraint on `P(v)` grounded at `a` for `(o, t1)` and at `b`
/// for `(o, t2)`.
pub fn random_instance<R: Rng + ?Sized>(
    rng: &mut R,
    max_vertices: usize,
) -> (Signature, Vec<NamedFormula>, EthicalConstraint) {
    let sig = Signature::from_parts(
        ["a", "b"],
        [],
        [("A".to_string(), 0), ("B".to_string(), 0), ("C".to_string(), 0), ("P".to_string(), 1)],
    )
    .expect("fixed signature");
    let p = |c: Term| Wff::atom("P", vec![c]);
    let ground = [Wff::prop("A"), Wff::prop("B"), Wff::prop("C"), p(Term::cst("a")), p(Term::cst("b"))];
    let n = rng.random_range(1..=max_vertices);
    let vertices = (1..=n)
        .map(|i| NamedFormula { name: format!("p{i}"), formula: random_wff(rng, &ground, 2) })
        .collect();
    let open = [Wff::prop("A"), Wff::prop("B"), p(Term::var("v"))];
    let mut template = random_wff(rng, &open, 2);
    if !template.free_vars().contains("v") {
        let pv = p(Term::var("v"));
        template = if rng.random_bool(0.5) { Wff::or(template, pv) } else { Wff::and(template, Wff::not(pv)) };
    }
    let ec = EthicalConstraint::new(
        template,
        vec!["v".into()],
        vec![("o".into(), "t1".into(), vec!["a".into()]), ("o".into(), "t2".into(), vec!["b".into()])],
    )
    .expect("template mentions v");
    (sig, vertices, ec)
}
