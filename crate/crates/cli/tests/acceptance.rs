//! Acceptance run: each criterion prints one PASS/FAIL line with its runtime, and the process
//! exits nonzero if any fails.

// `!(a <= b)` on floats is deliberate: NaN must fail a check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use mltmf_core::automaton::{apply_mutation, encode_automaton, mutations, random_run, simulate, verify_trace, FiniteAutomaton};
use mltmf_core::bound::{
    build_model_distribution, generalization_bound, random_instance as bound_instance, tvd_exact, tvd_oracle,
    BoundBranch, BoundOptions, FiniteDistribution,
};
use mltmf_core::ethics::{
    build_violation_hypergraph, check_ethical_safety, inject_safeguard, max_safe_subset,
    random_instance as ethics_instance, EthicalConstraint, EthicsError, NamedFormula, SolveMode, DEFAULT_K_MAX,
};
use mltmf_core::info::{
    check_enabling_map, check_interpretability, check_noisy_symmetry, compose_noisy, recoverable_reduction,
    EnablingMapping, InformationSextuple, NoiseSpec, Reason, SextupleDocument, StateSet,
};
use mltmf_core::learn::{
    apply_learn, can_learn, check_inheritance, Activation, FactQuery, FactUnion, LearnRule, Rational, ToyBatch,
    ToyGradient, ToyModelState,
};
use mltmf_core::logic::random::{inject_self_application, FormulaGen, GenConfig};
use mltmf_core::{entails, evaluate, format_formula, parse_formula, QuantifierBudget, Signature, Wff};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

/// Name, runtime limit and check.
type Criterion = (&'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn budget() -> QuantifierBudget {
    QuantifierBudget::default()
}

const LETTERS: [&str; 12] = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L"];

fn letters_sig(n: usize) -> Signature {
    let mut sig = Signature::new();
    for p in &LETTERS[..n] {
        sig.add_predicate(*p, 0).unwrap();
    }
    sig
}

fn prop_gen(sig: &Signature, depth: usize) -> FormulaGen<'_> {
    FormulaGen::new(
        sig,
        GenConfig { max_depth: depth, variables: vec![], higher_order: false, closed: true, ..GenConfig::default() },
    )
}

/// Truth of a quantifier-free formula; atoms are looked up by their printed form.
fn truth(f: &Wff, v: &BTreeMap<String, bool>) -> bool {
    match f {
        Wff::Atom(..) => v[&format_formula(f)],
        Wff::Not(a) => !truth(a, v),
        Wff::Implies(a, b) => !truth(a, v) || truth(b, v),
        Wff::And(a, b) => truth(a, v) && truth(b, v),
        Wff::Or(a, b) => truth(a, v) || truth(b, v),
        Wff::Iff(a, b) => truth(a, v) == truth(b, v),
        Wff::ForAll(..) | Wff::Exists(..) => panic!("quantifier in a propositional formula"),
    }
}

fn table(atoms: &[&str]) -> Vec<BTreeMap<String, bool>> {
    (0u32..1 << atoms.len())
        .map(|bits| atoms.iter().enumerate().map(|(i, a)| (a.to_string(), bits & 1 << i != 0)).collect())
        .collect()
}

fn true_formula(gen: &FormulaGen<'_>, v: &BTreeMap<String, bool>, rng: &mut ChaCha8Rng) -> Wff {
    loop {
        let f = gen.formula(rng);
        if truth(&f, v) {
            return f;
        }
    }
}

fn parser_round_trip() -> Outcome {
    let sig = Signature::from_json_str(
        r#"{"constants":["a","b","c"],"functions":{"f":1,"g":2,"h":3},"predicates":{"P":1,"Q":2,"R":0,"S":3}}"#,
    )
    .unwrap();
    let gen = FormulaGen::new(&sig, GenConfig::default());
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut pool = Vec::new();
    for _ in 0..1000 {
        let f = gen.formula(&mut rng);
        let text = format_formula(&f);
        let back = parse_formula(&text, &sig).map_err(|e| format!("`{text}` rejected: {e}"))?;
        ensure!(back == f, "`{text}` reparsed as {back:?}");
        pool.push(f);
    }
    let mut mutants = 0;
    while mutants < 200 {
        let f = pool.choose(&mut rng).unwrap();
        let Some(m) = inject_self_application(f, &sig, &mut rng) else { continue };
        let text = format_formula(&m);
        match parse_formula(&text, &sig) {
            Ok(_) => return Err(format!("self-application accepted: `{text}`")),
            Err(e) => ensure!(e.code() == "self_application", "`{text}` rejected for the wrong reason: {e}"),
        }
        mutants += 1;
    }
    Ok("1000 round trips, 200 mutants rejected".into())
}

fn entailment_oracle() -> Outcome {
    let sig = letters_sig(12);
    let gen = prop_gen(&sig, 3);
    let rows = table(&LETTERS);
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut positives = 0;
    for _ in 0..500 {
        let k = rng.random_range(0..4);
        let premises: Vec<Wff> = (0..k).map(|_| gen.formula(&mut rng)).collect();
        let goal = if rng.random_bool(0.3) && !premises.is_empty() {
            // Weaken a premise so positive instances are common.
            Wff::or(premises[0].clone(), gen.formula(&mut rng))
        } else {
            gen.formula(&mut rng)
        };
        let expected = rows.iter().all(|v| !premises.iter().all(|p| truth(p, v)) || truth(&goal, v));
        let got = entails(&premises, &goal, &sig, 1, &budget()).map_err(|e| e.to_string())?;
        ensure!(got == expected, "disagreement on {:?} |= {}", premises.iter().map(format_formula).collect::<Vec<_>>(), format_formula(&goal));
        positives += expected as usize;
    }
    Ok(format!("500 instances over 12 atoms, {positives} entailed"))
}

fn table_run(m: &FiniteAutomaton, initial: &str, word: &[String]) -> (Vec<String>, Vec<String>) {
    let mut u = initial.to_string();
    let mut states = vec![u.clone()];
    let mut outs = Vec::new();
    for q in word {
        let key = (u.clone(), q.clone());
        outs.push(m.out[&key].clone());
        u = m.next[&key].clone();
        states.push(u.clone());
    }
    (states, outs)
}

fn automaton_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let (mut checked, mut degenerate) = (0, 0);
    while checked < 100 {
        let (m, initial, word) = random_run(&mut rng, 4, 4, 4, 6);
        let trace = simulate(&m, &initial, &word).map_err(|e| e.to_string())?;
        let (states, outs) = table_run(&m, &initial, &word);
        ensure!(trace.states == states && trace.outputs == outs, "simulation disagrees with the tables");
        let e = encode_automaton(&m, &initial, &word).map_err(|e| e.to_string())?;
        ensure!(verify_trace(&e), "encoding of a genuine run fails verification");
        let Some(mu) = mutations(&m, &e).choose(&mut rng).cloned() else {
            // A single state with no alternative inputs or outputs admits only one trace.
            let fixed = word.is_empty() || (m.inputs.len() == 1 && m.outputs.len() == 1);
            ensure!(m.states.len() == 1 && fixed, "no mutation site");
            degenerate += 1;
            continue;
        };
        let bad = apply_mutation(&e, &mu).map_err(|e| e.to_string())?;
        ensure!(!verify_trace(&bad), "mutation {mu:?} undetected");
        checked += 1;
    }
    Ok(format!("100 automata verified, one mutation each detected ({degenerate} single-trace machines redrawn)"))
}

fn atom_state(label: &str, prefix: &str, n: usize) -> StateSet {
    let mut sig = Signature::new();
    for i in 0..n {
        sig.add_predicate(format!("{prefix}{i}"), 0).unwrap();
    }
    let fs = (0..n).map(|i| Wff::prop(format!("{prefix}{i}"))).collect();
    StateSet::realize(label, vec![], vec![], fs, &sig, &budget()).unwrap()
}

fn surjections(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut f = vec![0; n];
    loop {
        if (0..m).all(|j| f.contains(&j)) {
            out.push(f.clone());
        }
        let Some(i) = (0..n).rev().find(|&i| f[i] + 1 < m) else { return out };
        f[i] += 1;
        f[i + 1..].iter_mut().for_each(|x| *x = 0);
    }
}

/// m! S(n, m) by the Stirling recurrence.
fn surjection_count(n: usize, m: usize) -> usize {
    let mut s = vec![vec![0usize; m + 1]; n + 1];
    s[0][0] = 1;
    for i in 1..=n {
        for j in 1..=m {
            s[i][j] = j * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    (1..=m).product::<usize>() * s[n][m]
}

fn recoverable_reduction_exhaustive() -> Outcome {
    let mut total = 0;
    for n in 1..=6 {
        let source = atom_state("So", "P", n);
        for m in 1..=n {
            let target = atom_state("Sc", "Q", m);
            let all = surjections(n, m);
            ensure!(all.len() == surjection_count(n, m), "enumerated {} surjections {n}->{m}", all.len());
            for f in all {
                let map = EnablingMapping::from_image(source.clone(), target.clone(), f.iter().map(|&j| Some(j)).collect())
                    .map_err(|e| e.to_string())?;
                let injective = n == m;
                let report = check_enabling_map(&map).map_err(|e| e.to_string())?;
                ensure!(report.surjective && report.injective == injective, "{f:?}: wrong mapping report");
                let (quotient, reduced) = recoverable_reduction(&map).map_err(|e| e.to_string())?;
                ensure!(reduced.is_bijective(), "{f:?}: quotient map not bijective");
                let classes: BTreeSet<Vec<usize>> = (0..m).map(|j| (0..n).filter(|&i| f[i] == j).collect()).collect();
                ensure!(quotient.classes.iter().cloned().collect::<BTreeSet<_>>() == classes, "{f:?}: wrong classes");
                ensure!(reduced.equals_original(&quotient, &map) == injective, "{f:?}: reduction vs original");
                total += 1;
            }
        }
    }
    Ok(format!("{total} surjections"))
}

fn noisy_symmetry() -> Outcome {
    let sig = letters_sig(5);
    let gen = prop_gen(&sig, 2);
    let rows = table(&LETTERS[..5]);
    let mut rng = ChaCha8Rng::seed_from_u64(1005);
    for _ in 0..200 {
        let v = rows.choose(&mut rng).unwrap().clone();
        let mut pool: Vec<Wff> = Vec::new();
        while pool.len() < 7 {
            let f = true_formula(&gen, &v, &mut rng);
            if !pool.iter().any(|g| g.desugar() == f.desugar()) {
                pool.push(f);
            }
        }
        let k = rng.random_range(1..=4);
        let s = StateSet::realize("S", vec![], vec!["t".into()], pool[..k].to_vec(), &sig, &budget())
            .map_err(|e| e.to_string())?;
        let loss: Vec<Wff> = pool[1..k].iter().filter(|_| rng.random_bool(0.4)).cloned().collect();
        let superposed: Vec<Wff> = pool[k..].iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
        let noise = NoiseSpec::new(loss.clone(), superposed.clone());
        let noisy = compose_noisy(&s, &noise, &budget()).map_err(|e| e.to_string())?;
        let expected: BTreeSet<Wff> =
            pool[..k].iter().filter(|f| !loss.contains(f)).chain(&superposed).map(Wff::desugar).collect();
        ensure!(noisy.formulas().iter().map(Wff::desugar).collect::<BTreeSet<_>>() == expected, "noisy state differs from set arithmetic");
        let i = InformationSextuple::intrinsic("o", vec!["t".into()], s).map_err(|e| e.to_string())?;
        let n = InformationSextuple::intrinsic("o", vec!["t".into()], noisy).map_err(|e| e.to_string())?;
        let report = check_noisy_symmetry(&i, &n, &budget()).map_err(|e| e.to_string())?;
        ensure!(report.forward.is_some() && report.backward.is_some() && report.symmetric, "asymmetric noise pair");
    }
    Ok("200 pairs symmetric in both directions".into())
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.random_range(-6..=6), rng.random_range(1..=4))
}

fn random_toy(rng: &mut ChaCha8Rng) -> (ToyModelState, ToyBatch) {
    let (d_in, d_out, bias) = *[(1, 1, true), (2, 1, false), (2, 1, true), (3, 1, true), (1, 2, true), (2, 2, false), (1, 3, false)].choose(rng).unwrap();
    let n = d_in * d_out + if bias { d_out } else { 0 };
    let m = ToyModelState {
        params: (0..n).map(|_| random_rat(rng)).collect(),
        rate: rat(rng.random_range(1..=5), 10),
        momentum: rat(rng.random_range(0..=3), 4),
        velocity: (0..n).map(|_| random_rat(rng)).collect(),
        architecture: vec![d_in, d_out],
        bias,
        activations: vec![Activation::Identity],
    };
    let b = rng.random_range(1..=3);
    let batch = ToyBatch {
        inputs: (0..b).map(|_| (0..d_in).map(|_| random_rat(rng)).collect()).collect(),
        targets: (0..b).map(|_| (0..d_out).map(|_| random_rat(rng)).collect()).collect(),
        loss: "quadratic".into(),
    };
    (m, batch)
}

/// θ − η(∇L + βv) with ∇L of the mean squared error written out for a linear layer.
fn analytic_step(m: &ToyModelState, batch: &ToyBatch) -> Vec<Rational> {
    let (d_in, d_out) = (m.architecture[0], m.architecture[1]);
    let count = rat(batch.inputs.len() as i64, 1);
    let mut grad = vec![Rational::zero(); m.params.len()];
    for (x, y) in batch.inputs.iter().zip(&batch.targets) {
        for j in 0..d_out {
            let mut z: Rational = (0..d_in).map(|i| &m.params[j * d_in + i] * &x[i]).sum();
            if m.bias {
                z += &m.params[d_in * d_out + j];
            }
            let err = (z - &y[j]) * rat(2, 1) / &count;
            for i in 0..d_in {
                grad[j * d_in + i] += &err * &x[i];
            }
            if m.bias {
                grad[d_in * d_out + j] += err;
            }
        }
    }
    (0..grad.len()).map(|k| &m.params[k] - &m.rate * (&grad[k] + &m.momentum * &m.velocity[k])).collect()
}

fn state(label: &str, time: &str, formulas: Vec<Wff>) -> Result<StateSet, String> {
    let sig = Signature::infer(&formulas).map_err(|e| e.to_string())?;
    StateSet::realize(label, vec![], vec![time.into()], formulas, &sig, &budget()).map_err(|e| e.to_string())
}

fn learning_inheritance() -> Outcome {
    let sig = letters_sig(4);
    let gen = prop_gen(&sig, 2);
    let rows = table(&LETTERS[..4]);
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let (mut unions, mut steps, mut refused) = (0, 0, 0);
    let mut worst = 0.0f64;
    // Alternate rules until 200 applications succeed; refused inconsistent unions do not count.
    while unions + steps < 200 {
        let (before, after, rule): (StateSet, StateSet, &dyn LearnRule) = if unions <= steps {
            let a = rows.choose(&mut rng).unwrap();
            let b = if rng.random_bool(0.7) { a } else { rows.choose(&mut rng).unwrap() };
            let x: Vec<Wff> = (0..rng.random_range(1..=3)).map(|_| true_formula(&gen, a, &mut rng)).collect();
            let y: Vec<Wff> = (0..rng.random_range(1..=3)).map(|_| true_formula(&gen, b, &mut rng)).collect();
            let jointly = rows.iter().any(|v| x.iter().chain(&y).all(|f| truth(f, v)));
            let sx = StateSet::realize("S", vec![], vec!["t1".into()], x, &sig, &budget()).map_err(|e| e.to_string())?;
            let sy = StateSet::realize("T", vec![], vec!["t2".into()], y, &sig, &budget()).map_err(|e| e.to_string())?;
            let learnable = can_learn(&FactUnion, &sx, &sy, &budget()).map_err(|e| e.to_string())?;
            ensure!(learnable == jointly, "learnability disagrees with truth tables");
            if !jointly {
                ensure!(apply_learn(&FactUnion, &sx, &sy, &budget()).is_err(), "inconsistent union was learned");
                refused += 1;
                continue;
            }
            let after = apply_learn(&FactUnion, &sx, &sy, &budget()).map_err(|e| e.to_string())?;
            unions += 1;
            (sx, after, &FactUnion)
        } else {
            let (m, batch) = random_toy(&mut rng);
            let sx = state("S", "t1", vec![m.to_formula()])?;
            let sy = state("D", "t1", vec![batch.to_formula()])?;
            let after = apply_learn(&ToyGradient, &sx, &sy, &budget()).map_err(|e| e.to_string())?;
            let learned = ToyModelState::from_formulas(after.formulas()).map_err(|e| e.to_string())?;
            for (got, want) in learned.params.iter().zip(analytic_step(&m, &batch)) {
                worst = worst.max((got - want).abs().to_f64().unwrap());
            }
            ensure!(worst <= 1e-9, "toy step off by {worst}");
            steps += 1;
            (sx, after, &ToyGradient)
        };
        ensure!(check_inheritance(&before, &after, rule), "inheritance fails for {}", rule.name());
        // The state's realization must be a model of every formula it holds.
        for f in after.formulas() {
            let holds = evaluate(f, after.realization(), &budget()).map_err(|e| e.to_string())?;
            ensure!(holds, "learned state is inconsistent at {}", format_formula(f));
        }
    }
    Ok(format!("{unions} unions, {steps} toy steps (max error {worst:e}), {refused} inconsistent unions refused"))
}

const ETHICS_ATOMS: [&str; 5] = ["A", "B", "C", "P(a)", "P(b)"];

/// Subset safety by truth tables over the instance atoms.
struct SafetyTable {
    vertex_masks: Vec<u32>,
    instance_ok: Vec<Vec<bool>>,
}

impl SafetyTable {
    fn new(vertices: &[NamedFormula], ec: &EthicalConstraint, atoms: &[&str]) -> Self {
        let rows = table(atoms);
        let vertex_masks = rows
            .iter()
            .map(|a| vertices.iter().enumerate().fold(0, |m, (i, v)| if truth(&v.formula, a) { m | 1 << i } else { m }))
            .collect();
        let instance_ok = (0..ec.grounding().len()).map(|k| rows.iter().map(|a| truth(&ec.instance_at(k), a)).collect()).collect();
        SafetyTable { vertex_masks, instance_ok }
    }

    fn safe(&self, mask: u32) -> bool {
        self.instance_ok.iter().all(|ok| self.vertex_masks.iter().zip(ok).any(|(&vm, &o)| o && vm & mask == mask))
    }

    fn best(&self, n: usize) -> usize {
        (0u32..1 << n).filter(|&m| self.safe(m)).map(u32::count_ones).max().unwrap_or(0) as usize
    }
}

fn mask(members: &[usize]) -> u32 {
    members.iter().fold(0, |m, &i| m | 1 << i)
}

/// Solves one instance and checks it against the table; returns the kept names.
fn ethics_case(sig: &Signature, vertices: Vec<NamedFormula>, ec: &EthicalConstraint, oracle: &SafetyTable) -> Result<Vec<String>, String> {
    let n = vertices.len();
    let h = build_violation_hypergraph(vertices.clone(), ec, sig, DEFAULT_K_MAX, &budget()).map_err(|e| e.to_string())?;
    let exact = max_safe_subset(&h, SolveMode::Exact, &budget()).map_err(|e| e.to_string())?;
    ensure!(oracle.safe(mask(&exact.members)), "returned set is unsafe");
    ensure!(exact.members.len() == oracle.best(n), "kept {} of a possible {}", exact.members.len(), oracle.best(n));
    let kept: Vec<Wff> = exact.members.iter().map(|&i| vertices[i].formula.clone()).collect();
    ensure!(check_ethical_safety(&kept, ec, sig, &budget()).map_err(|e| e.to_string())?.is_safe(), "safety check rejects the kept set");
    let guarded = inject_safeguard(vertices, ec, sig, SolveMode::Exact, DEFAULT_K_MAX, &budget()).map_err(|e| e.to_string())?;
    let recheck = check_ethical_safety(&guarded.augmented_output, ec, &guarded.signature, &budget()).map_err(|e| e.to_string())?;
    ensure!(guarded.augmented_verdict.is_safe() && recheck.is_safe(), "safeguarded output is unsafe");
    Ok(exact.names)
}

fn ethics_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let (mut solved, mut hopeless) = (0, 0);
    for _ in 0..200 {
        let (sig, vertices, ec) = ethics_instance(&mut rng, 12);
        let oracle = SafetyTable::new(&vertices, &ec, &ETHICS_ATOMS);
        if !oracle.safe(0) {
            let built = build_violation_hypergraph(vertices, &ec, &sig, DEFAULT_K_MAX, &budget());
            ensure!(matches!(built, Err(EthicsError::ConstraintAlwaysViolated { .. })), "unsatisfiable constraint not reported");
            hopeless += 1;
            continue;
        }
        ethics_case(&sig, vertices, &ec, &oracle)?;
        solved += 1;
    }

    let doc = serde_json::from_str::<serde_json::Value>(&std::fs::read_to_string(common::fixture("ethics/outputs.json")).unwrap()).unwrap();
    let base = Signature::from_json_value(&doc["signature"]).map_err(|e| e.to_string())?;
    let vertices: Vec<NamedFormula> = doc["formulas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|o| NamedFormula {
            name: o["name"].as_str().unwrap().into(),
            formula: parse_formula(o["formula"].as_str().unwrap(), &base).unwrap(),
        })
        .collect();
    let raw = serde_json::from_str(&std::fs::read_to_string(common::fixture("ethics/constraint.json")).unwrap()).unwrap();
    let ec = EthicalConstraint::from_json_value(&raw, &base).map_err(|e| e.to_string())?;
    let sig = ec.extend_signature(&base).map_err(|e| e.to_string())?;
    let oracle = SafetyTable::new(&vertices, &ec, &["Help(a)", "Harm(a)", "Angry(a)", "Polite(a)"]);
    let kept = ethics_case(&sig, vertices, &ec, &oracle)?;
    ensure!(kept == ["p1", "p3", "p5"], "fixture kept {kept:?}");
    Ok(format!("{solved} random instances solved, {hopeless} always violated, fixture keeps {{p1,p3,p5}}"))
}

fn load_distribution(rel: &str) -> Result<FiniteDistribution, String> {
    let v = serde_json::from_str(&std::fs::read_to_string(common::fixture(rel)).unwrap()).unwrap();
    FiniteDistribution::from_json_value(&v, true).map_err(|e| e.to_string())
}

fn load_states(rel: &str) -> Vec<String> {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(common::fixture(rel)).unwrap()).unwrap();
    v["states"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect()
}

fn generalization() -> Outcome {
    let opts = BoundOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1008);
    let mut slack = f64::INFINITY;
    for _ in 0..1000 {
        let (s_ou, s_oq, p) = bound_instance(&mut rng, 10);
        ensure!(s_oq.len() <= 10, "query support too large");
        let r = generalization_bound(&s_ou, &s_oq, &p, &opts).map_err(|e| e.to_string())?;
        let pm = build_model_distribution(&s_ou, &s_oq, &p).map_err(|e| e.to_string())?;
        // Direct sum over the query support, independent of the library's distance routine.
        let half_l1 = 0.5 * s_oq.iter().map(|l| (p.mass(l).unwrap() - pm.mass(l).unwrap()).abs()).sum::<f64>();
        let t = tvd_oracle(&p, &pm).map_err(|e| e.to_string())?;
        ensure!((t - half_l1).abs() < 1e-12, "distance {t} vs {half_l1}");
        ensure!(t <= r.bound + 1e-12, "distance {t} above bound {}", r.bound);
        ensure!(r.components.radicand >= -1e-12, "radicand {}", r.components.radicand);
        slack = slack.min(r.bound - t);
    }
    let q = load_distribution("genbound/query.json")?;
    let s_oq = q.labels().to_vec();
    let u = load_states("genbound/model.json");
    let r = generalization_bound(&u, &s_oq, &q, &opts).map_err(|e| e.to_string())?;
    ensure!((r.bound - 0.114373).abs() < 1e-6, "fixture bound {}", r.bound);
    let pm = build_model_distribution(&u, &s_oq, &q).map_err(|e| e.to_string())?;
    let exact = tvd_exact(&q, &pm).map_err(|e| e.to_string())?.ok_or("no exact distance")?;
    ensure!(exact == rat(1, 20), "fixture distance {exact}");

    let q = load_distribution("genbound/query_subset.json")?;
    let r = generalization_bound(&load_states("genbound/model_subset.json"), q.labels(), &q, &opts).map_err(|e| e.to_string())?;
    ensure!(r.branch == BoundBranch::Subset && r.bound == 0.0, "subset fixture bound {}", r.bound);
    Ok(format!("1000 instances (min slack {slack:.3e}), fixture bound {:.6}, distance 1/20", 0.114373))
}

fn interpretability() -> Outcome {
    let load = |name: &str| -> Result<InformationSextuple, String> {
        SextupleDocument::load(&common::fixture(&format!("interpret/{name}.json")), &budget())
            .map(|d| d.sextuple)
            .map_err(|e| e.to_string())
    };
    let (u, q, r) = (load("model")?, load("input")?, load("output")?);
    let (bu, bq, br) = (load("model_lossy")?, load("input_lossy")?, load("output_lossy")?);
    let ok = check_interpretability(&u, &q, &r, &FactQuery, &budget()).map_err(|e| e.to_string())?;
    ensure!(ok.is_interpretable(), "fixture not interpretable: {:?}", ok.reasons());
    let breaks = [
        ((&bu, &q, &r), Reason::IuNotRecoverable),
        ((&u, &bq, &r), Reason::IqNotRecoverable),
        ((&u, &q, &br), Reason::IrNotRecoverable),
    ];
    for ((a, b, c), reason) in breaks {
        let v = check_interpretability(a, b, c, &FactQuery, &budget()).map_err(|e| e.to_string())?;
        ensure!(v.reasons() == [reason], "expected {} but got {:?}", reason.code(), v.reasons());
    }
    Ok("interpretable; each single break names its side".into())
}

fn cli_determinism() -> Outcome {
    for (name, args, code) in common::CASES {
        let (first, c1) = common::run_json(args);
        let (second, c2) = common::run_json(args);
        ensure!(first == second, "{name}: two runs differ");
        ensure!(c1 == *code && c2 == *code, "{name}: exit {c1}, expected {code}");
        let golden = common::read_golden(&common::golden_path(name)).ok_or(format!("{name}: no golden report"))?;
        ensure!(golden == first, "{name}: differs from its golden report");
    }
    Ok(format!("{} reports byte-identical to goldens", common::CASES.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("parser round-trip", Duration::from_secs(5), parser_round_trip),
        ("entailment vs truth tables", Duration::from_secs(30), entailment_oracle),
        ("automaton round-trip", Duration::from_secs(10), automaton_round_trip),
        ("recoverable reduction", Duration::from_secs(5), recoverable_reduction_exhaustive),
        ("noisy symmetry", Duration::from_secs(5), noisy_symmetry),
        ("learning inheritance", Duration::from_secs(10), learning_inheritance),
        ("ethics exactness", Duration::from_secs(60), ethics_exactness),
        ("generalization bound", Duration::from_secs(10), generalization),
        ("interpretability", Duration::from_secs(2), interpretability),
        ("cli determinism", Duration::from_secs(10), cli_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (status, detail) = match outcome {
            Ok(d) if took <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {}s limit", limit.as_secs())),
            Err(e) => ("FAIL", e),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("{status} {:>2} {name:<28} {:>8.2?}  {detail}", i + 1, took);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
