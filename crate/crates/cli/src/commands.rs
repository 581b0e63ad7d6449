//! One handler per subcommand.

use std::path::{Path, PathBuf};

use mltmf_core::automaton::{
    apply_mutation, encode_automaton, encoding_signature, mutations, recognize, simulate, verify_trace,
    FiniteAutomaton, Mutation, Trace,
};
use mltmf_core::bound::{
    build_model_distribution, generalization_bound, kl_divergence, tvd_exact, tvd_oracle, BoundOptions,
    FiniteDistribution, LogBase, TOLERANCE,
};
use mltmf_core::ethics::{
    build_violation_hypergraph, check_ethical_safety, inject_safeguard, max_safe_subset, EthicalConstraint,
    EthicsError, Hyperedge, NamedFormula, SafetyVerdict,
};
use mltmf_core::info::{
    check_enabling_map, check_noisy_symmetry, compose_noisy, recoverable_reduction, state_json, EnablingMapping,
    InfoError, InformationSextuple, NoiseSpec, SextupleDocument,
};
use mltmf_core::learn::{
    apply_learn, apply_process, can_learn, can_process, check_inheritance, learn_rule, process_rule, LearnError,
    ToyGradient, ToyModelState,
};
use mltmf_core::logic::{ParseError, Wff};
use mltmf_core::model::{default_domain_size, find_model};
use mltmf_core::{check_consistency, entails, format_formula, parse_formula, ConsistencyVerdict, QuantifierBudget};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::input::{load_state, read_json, CliError, FormulaSource};
use crate::report::Report;
use crate::{AutomatonCommand, Cli, Command, EthicsOp, FormulaArgs, RunArgs};

type Outcome = Result<Report, CliError>;

pub fn run(cli: &Cli) -> Outcome {
    let budget = cli.budget();
    match &cli.command {
        Command::Check { input, texts } => check(input, texts),
        Command::Entail { input, premises, goal, domain } => {
            entail(input, premises, goal, domain.map(|d| d.get()), &budget)
        }
        Command::Consistency { input, texts, domain } => consistency(input, texts, domain.map(|d| d.get()), &budget),
        Command::Sextuple { file, reduce } => sextuple(file, *reduce, &budget),
        Command::Noise { file, trials } => noise(file, *trials, cli.seed, &budget),
        Command::Automaton { action } => automaton(action, cli.seed),
        Command::Learn { rule, learner, teacher } => learn(rule, learner, teacher, &budget),
        Command::Process { rule, model, query } => process(rule, model, query, &budget),
        Command::Ethics { formulas, constraint, op } => ethics(cli, formulas, constraint, *op, &budget),
        Command::Genbound { model, query, float, strict } => genbound(cli, model, query, *float, *strict),
        Command::Interpret { model, input, output, rule } => interpret(model, input, output, rule, &budget),
    }
}

fn texts(ws: &[Wff]) -> Vec<String> {
    ws.iter().map(format_formula).collect()
}

fn parse_kind(e: &ParseError) -> &'static str {
    match e {
        ParseError::Syntax { .. } => "Syntax",
        ParseError::UnknownSymbol { .. } => "UnknownSymbol",
        ParseError::ArityMismatch { .. } => "ArityMismatch",
        ParseError::SelfApplication { .. } => "SelfApplication",
        ParseError::KindMismatch { .. } => "KindMismatch",
    }
}

fn check(input: &FormulaArgs, extra: &[String]) -> Outcome {
    let src = FormulaSource::gather(input.formulas.as_ref(), input.sig.as_ref(), extra)?;
    if src.items.is_empty() {
        return Err(CliError::input("NO_FORMULAS", "nothing to check"));
    }
    let mut r = Report::new("check");
    let mut results = Vec::new();
    for (name, text) in &src.items {
        match parse_formula(text, &src.signature) {
            Ok(f) => {
                let printed = format_formula(&f);
                r.line(format!("{name}: ok: {printed}"));
                results.push(json!({"name": name, "valid": true, "formula": printed}));
            }
            Err(e) => {
                let code = e.code().to_uppercase();
                r.invalid(&code);
                r.line(format!("{name}: {}: {e}", parse_kind(&e)));
                results.push(json!({
                    "name": name,
                    "valid": false,
                    "code": code,
                    "diagnostic": parse_kind(&e),
                    "message": e.to_string(),
                }));
            }
        }
    }
    r.set("results", results);
    Ok(r)
}

fn entail(input: &FormulaArgs, extra: &[String], goal: &str, domain: Option<usize>, budget: &QuantifierBudget) -> Outcome {
    let src = FormulaSource::gather(input.formulas.as_ref(), input.sig.as_ref(), extra)?;
    let premises = src.parse()?;
    let goal = parse_formula(goal, &src.signature)?;
    let mut all = premises.clone();
    all.push(goal.clone());
    let size = domain.unwrap_or_else(|| default_domain_size(&src.signature, &all));
    let entailed = entails(&premises, &goal, &src.signature, size, budget)?;
    let mut r = Report::new("entail");
    r.set("premises", src.names()).set("goal", format_formula(&goal)).set("domain_size", size).set("entailed", entailed);
    if entailed {
        r.line(format!("{} premise(s) entail {} over {size} element(s)", premises.len(), format_formula(&goal)));
    } else {
        r.fail("NOT_ENTAILED");
        r.line(format!("{} is not entailed over {size} element(s)", format_formula(&goal)));
        let mut counter = premises.clone();
        counter.push(Wff::not(goal.clone()));
        if let Some(m) = find_model(&counter, &src.signature, size, budget)? {
            r.set("countermodel", m.to_json_value());
        }
    }
    Ok(r)
}

fn consistency(input: &FormulaArgs, extra: &[String], domain: Option<usize>, budget: &QuantifierBudget) -> Outcome {
    let src = FormulaSource::gather(input.formulas.as_ref(), input.sig.as_ref(), extra)?;
    let formulas = src.parse()?;
    let size = domain.unwrap_or_else(|| default_domain_size(&src.signature, &formulas));
    let mut r = Report::new("consistency");
    r.set("formulas", src.names()).set("domain_size", size);
    match check_consistency(&formulas, &src.signature, size, budget)? {
        ConsistencyVerdict::Consistent { model } => {
            r.set("consistent", true).set("model", model.to_json_value());
            r.line(format!("{} formula(s) are consistent over {size} element(s)", formulas.len()));
        }
        ConsistencyVerdict::Inconsistent { core } => {
            let names: Vec<String> = core.iter().map(|&i| src.items[i].0.clone()).collect();
            r.fail("INCONSISTENT");
            r.line(format!("inconsistent; minimal core: {}", names.join(", ")));
            r.set("consistent", false).set("core", names);
        }
    }
    Ok(r)
}

fn sextuple(file: &Path, reduce: bool, budget: &QuantifierBudget) -> Outcome {
    let doc = SextupleDocument::load(file, budget)?;
    let s = &doc.sextuple;
    let mapping = check_enabling_map(s.enabling())?;
    let mut r = Report::new("sextuple");
    r.set("sextuple", s.to_json_value());
    r.set("mapping", serde_json::to_value(&mapping).expect("serializes"));
    r.line(format!(
        "mapping: surjective {}, injective {}, recoverable {}",
        mapping.surjective, mapping.injective, mapping.recoverable
    ));
    if reduce {
        match recoverable_reduction(s.enabling()) {
            Ok((quotient, reduced)) => {
                let bijective = reduced.is_bijective();
                r.set(
                    "reduction",
                    json!({
                        "classes": quotient.texts(),
                        "image": reduced.image.iter().map(|&j| format_formula(&s.carrier_state().formulas()[j])).collect::<Vec<_>>(),
                        "bijective": bijective,
                        "equals_original": reduced.equals_original(&quotient, s.enabling()),
                    }),
                );
                r.line(format!("reduction: {} class(es), bijective {bijective}", quotient.len()));
                if !bijective {
                    r.fail("REDUCTION_NOT_BIJECTIVE");
                }
            }
            Err(InfoError::NotSurjective(unhit)) => {
                r.fail("NOT_SURJECTIVE");
                r.line(format!("no reduction: nothing maps to {}", unhit.join(", ")));
            }
            Err(e) => return Err(e.into()),
        }
    } else if !mapping.recoverable {
        r.fail("NOT_RECOVERABLE");
        if !mapping.injective {
            r.fail("NOT_INJECTIVE");
        }
        if !mapping.surjective {
            r.fail("NOT_SURJECTIVE");
        }
    }
    Ok(r)
}

fn noise_failure(e: InfoError) -> Result<&'static str, CliError> {
    match e {
        InfoError::LossNotSubset(_) => Ok("LOSS_NOT_SUBSET"),
        InfoError::SuperposedOverlaps(_) => Ok("SUPERPOSED_OVERLAPS"),
        InfoError::ResultInconsistent => Ok("NOISY_STATE_INCONSISTENT"),
        e => Err(e.into()),
    }
}

fn noise(file: &Path, trials: usize, seed: u64, budget: &QuantifierBudget) -> Outcome {
    let doc = SextupleDocument::load(file, budget)?;
    let spec = doc.noise.clone().ok_or_else(|| CliError::input("NO_NOISE", "the sextuple file has no `noise`"))?;
    let s = &doc.sextuple;
    let source = s.ontological_state();
    let mut r = Report::new("noise");
    r.set("noise", spec.to_json_value());
    match compose_noisy(source, &spec, budget) {
        Ok(noisy) => {
            r.line(format!("noisy state: {}", noisy.formula_texts().join("; ")));
            r.set("noisy_state", state_json(&noisy));
        }
        Err(e) => {
            let code = noise_failure(e)?;
            r.fail(code);
        }
    }
    if let Some(noisy) = &doc.noisy {
        let report = check_noisy_symmetry(s, noisy, budget)?;
        r.line(format!("symmetric: {}", report.symmetric));
        if !report.symmetric {
            r.fail("NOT_SYMMETRIC");
        }
        r.set("symmetry", serde_json::to_value(&report).expect("serializes"));
    }
    if trials > 0 {
        let (done, skipped, asymmetric) = noise_trials(s, &spec, trials, seed, budget)?;
        r.line(format!("random trials: {done} run, {skipped} inconsistent, {asymmetric} asymmetric"));
        r.set("trials", json!({"run": done, "inconsistent": skipped, "asymmetric": asymmetric, "seed": seed}));
        if asymmetric > 0 {
            r.fail("TRIAL_NOT_SYMMETRIC");
        }
    }
    Ok(r)
}

/// Random losses from the ontological state and random superpositions from the file's
/// superposed formulas, each checked for symmetry.
fn noise_trials(
    s: &InformationSextuple,
    spec: &NoiseSpec,
    trials: usize,
    seed: u64,
    budget: &QuantifierBudget,
) -> Result<(usize, usize, usize), CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let source = s.ontological_state();
    let pool: Vec<Wff> = spec.superposed.iter().filter(|f| !source.contains(f)).cloned().collect();
    let (mut done, mut skipped, mut asymmetric) = (0, 0, 0);
    for _ in 0..trials {
        let keep = rng.random_range(0..source.len());
        let loss: Vec<Wff> = source
            .formulas()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != keep && rng.random_bool(0.5))
            .map(|(_, f)| f.clone())
            .collect();
        let superposed: Vec<Wff> = pool.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
        let n = NoiseSpec::new(loss, superposed);
        let noisy = match compose_noisy(source, &n, budget) {
            Ok(x) => x,
            Err(InfoError::ResultInconsistent) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let other = InformationSextuple::new(
            s.ontology(),
            s.occurrence_times().to_vec(),
            s.carrier(),
            s.reflection_times().to_vec(),
            EnablingMapping::identity(noisy),
        )?;
        done += 1;
        if !check_noisy_symmetry(s, &other, budget)?.symmetric {
            asymmetric += 1;
        }
    }
    Ok((done, skipped, asymmetric))
}

fn trace_json(t: &Trace) -> Value {
    serde_json::to_value(t).expect("serializes")
}

fn describe(m: &Mutation) -> String {
    match m {
        Mutation::State { step, to } => format!("state at step {step} -> {to}"),
        Mutation::Input { step, to } => format!("input at step {step} -> {to}"),
        Mutation::Output { step, to } => format!("output at step {step} -> {to}"),
        Mutation::Next { step, to } => format!("transition at step {step} -> {to}"),
        Mutation::Out { step, to } => format!("output function at step {step} -> {to}"),
    }
}

fn automaton(action: &AutomatonCommand, seed: u64) -> Outcome {
    let (run, name) = match action {
        AutomatonCommand::Encode(r) => (r, "automaton encode"),
        AutomatonCommand::Simulate(r) => (r, "automaton simulate"),
        AutomatonCommand::Verify { run, .. } => (run, "automaton verify"),
    };
    let RunArgs { machine, initial, word } = run;
    let m = FiniteAutomaton::load(machine)?;
    let mut r = Report::new(name);
    r.set("initial", initial.as_str()).set("word", word.clone());
    match action {
        AutomatonCommand::Simulate(_) => {
            let t = simulate(&m, initial, word)?;
            r.line(format!("states: {}", t.states.join(" ")));
            r.line(format!("outputs: {}", t.outputs.join(" ")));
            r.set("trace", trace_json(&t));
        }
        AutomatonCommand::Encode(_) => {
            let e = encode_automaton(&m, initial, word)?;
            let formulas = texts(&e.formulas);
            for f in &formulas {
                r.line(f.clone());
            }
            r.set("formulas", formulas)
                .set("signature", encoding_signature(&m)?.to_json_value())
                .set("realization", e.realization.to_json_value())
                .set("times", e.times.clone())
                .set("trace", trace_json(&e.trace))
                .set("verified", verify_trace(&e));
        }
        AutomatonCommand::Verify { mutations: count, claim, .. } => {
            let e = encode_automaton(&m, initial, word)?;
            let recognized = recognize(&e.formulas).is_some();
            r.set("recognized", recognized).set("trace", trace_json(&e.trace));
            let checked = match claim {
                None => e.clone(),
                Some(path) => {
                    let claimed = read_claim(path)?;
                    if claimed != e.trace {
                        r.fail("TRACE_MISMATCH");
                    }
                    r.set("claim", trace_json(&claimed));
                    claim_realization(&e, &claimed)?
                }
            };
            let verified = verify_trace(&checked);
            r.set("verified", verified);
            r.line(format!("encoding verified: {verified}"));
            if !verified {
                r.fail("VERIFICATION_FAILED");
            }
            if !recognized {
                r.fail("NOT_RECOGNIZED");
            }
            let all = mutations(&m, &e);
            let chosen: Vec<usize> = if *count == 0 || *count >= all.len() {
                (0..all.len()).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut idx = sample(&mut rng, all.len(), *count).into_vec();
                idx.sort_unstable();
                idx
            };
            let mut undetected = Vec::new();
            for &i in &chosen {
                if verify_trace(&apply_mutation(&e, &all[i])?) {
                    undetected.push(describe(&all[i]));
                }
            }
            r.line(format!("mutations: {} tried, {} undetected", chosen.len(), undetected.len()));
            if !undetected.is_empty() {
                r.fail("MUTATION_UNDETECTED");
            }
            r.set("mutations", json!({"tried": chosen.len(), "undetected": undetected}));
        }
    }
    Ok(r)
}

fn read_claim(path: &Path) -> Result<Trace, CliError> {
    let v = read_json(path)?;
    let list = |key: &str| -> Result<Vec<String>, CliError> {
        v.get(key)
            .and_then(Value::as_array)
            .and_then(|a| a.iter().map(|s| s.as_str().map(str::to_string)).collect())
            .ok_or_else(|| CliError::input("MALFORMED_INPUT", format!("claim needs a `{key}` list of names")))
    };
    Ok(Trace { states: list("states")?, outputs: list("outputs")? })
}

/// The realization with the claimed states and outputs written over the simulated ones.
fn claim_realization(
    e: &mltmf_core::automaton::EncodedAutomaton,
    claim: &Trace,
) -> Result<mltmf_core::automaton::EncodedAutomaton, CliError> {
    if claim.states.len() != e.trace.states.len() || claim.outputs.len() != e.trace.outputs.len() {
        return Err(CliError::input("MALFORMED_INPUT", "claimed trace has the wrong length"));
    }
    let mut out = e.clone();
    for (step, (c, s)) in claim.states.iter().zip(&e.trace.states).enumerate() {
        if c != s {
            out = out.with_realization(apply_mutation(&out, &Mutation::State { step, to: c.clone() })?.realization);
        }
    }
    for (step, (c, s)) in claim.outputs.iter().zip(&e.trace.outputs).enumerate() {
        if c != s {
            out = out.with_realization(apply_mutation(&out, &Mutation::Output { step, to: c.clone() })?.realization);
        }
    }
    Ok(out)
}

fn learn(rule_name: &str, learner: &Path, teacher: &Path, budget: &QuantifierBudget) -> Outcome {
    let rule = learn_rule(rule_name)?;
    let sx = load_state(learner, budget)?;
    let sy = load_state(teacher, budget)?;
    let mut r = Report::new("learn");
    r.set("rule", rule_name).set("learner", state_json(&sx)).set("teacher", state_json(&sy));
    if !can_learn(rule.as_ref(), &sx, &sy, budget)? {
        r.fail("NOT_LEARNABLE");
        if rule_name == "toy_gradient" {
            match ToyGradient.assess(sx.formulas(), sy.formulas()) {
                None => {
                    r.fail("NOT_A_TOY_MODEL");
                }
                Some((_, _, l)) => {
                    for (ok, code) in [
                        (l.dimensionality, "DIMENSIONALITY_MISMATCH"),
                        (l.activation_feasible, "ACTIVATION_INFEASIBLE"),
                        (l.gradient_exists, "NO_GRADIENT"),
                    ] {
                        if !ok {
                            r.fail(code);
                        }
                    }
                }
            }
        }
        r.line(format!("`{}` cannot learn from `{}`", sx.label(), sy.label()));
        return Ok(r);
    }
    let learned = match apply_learn(rule.as_ref(), &sx, &sy, budget) {
        Ok(s) => s,
        Err(LearnError::TimeOrder { latest, earliest }) => {
            r.fail("TIME_ORDER");
            r.line(format!("input time {latest} is after result time {earliest}"));
            return Ok(r);
        }
        Err(LearnError::ResultInconsistent(_)) => {
            r.fail("RESULT_INCONSISTENT");
            return Ok(r);
        }
        Err(e) => return Err(e.into()),
    };
    let inherited = check_inheritance(&sx, &learned, rule.as_ref());
    r.set("learned", state_json(&learned)).set("inherited", inherited);
    r.line(format!("learned `{}`:", learned.label()));
    for f in learned.formula_texts() {
        r.line(format!("  {f}"));
    }
    r.line(format!("rule inherited: {inherited}"));
    if !inherited {
        r.fail("INHERITANCE_FAILED");
    }
    if rule_name == "toy_gradient" {
        let model = ToyModelState::from_formulas(learned.formulas())?;
        r.set(
            "toy_model",
            json!({
                "params": model.params.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                "velocity": model.velocity.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    Ok(r)
}

fn process(rule_name: &str, model: &Path, query: &Path, budget: &QuantifierBudget) -> Outcome {
    let rule = process_rule(rule_name)?;
    let su = load_state(model, budget)?;
    let sq = load_state(query, budget)?;
    let mut r = Report::new("process");
    r.set("rule", rule_name).set("model", state_json(&su)).set("query", state_json(&sq));
    if !can_process(rule.as_ref(), &su, &sq, budget)? {
        r.fail("NOT_PROCESSABLE");
        r.line(format!("`{}` cannot process `{}`", su.label(), sq.label()));
        return Ok(r);
    }
    let out = apply_process(rule.as_ref(), &su, &sq, budget)?;
    for f in out.formula_texts() {
        r.line(f);
    }
    r.set("output", state_json(&out));
    Ok(r)
}

fn edges_json(h: &mltmf_core::ethics::ViolationHypergraph, edges: &[Hyperedge]) -> Value {
    edges.iter().map(|e| json!({"members": h.names(&e.members), "witness": e.witness})).collect()
}

fn ethics(cli: &Cli, formulas: &PathBuf, constraint: &Path, op: EthicsOp, budget: &QuantifierBudget) -> Outcome {
    let src = FormulaSource::gather(Some(formulas), None, &[])?;
    let parsed = src.parse()?;
    let ec = EthicalConstraint::from_json_value(&read_json(constraint)?, &src.signature)?;
    let sig = ec.extend_signature(&src.signature)?;
    let named: Vec<NamedFormula> =
        src.names().into_iter().zip(parsed.iter().cloned()).map(|(name, formula)| NamedFormula { name, formula }).collect();
    let mut r = Report::new("ethics");
    let op_name = match op {
        EthicsOp::Safety => "safety",
        EthicsOp::Filter => "filter",
        EthicsOp::Safeguard => "safeguard",
    };
    r.set("op", op_name);
    let result = match op {
        EthicsOp::Safety => check_ethical_safety(&parsed, &ec, &sig, budget).map(|v| {
            match &v {
                SafetyVerdict::Safe => {
                    r.line("safe");
                }
                SafetyVerdict::Unsafe { witness, core } => {
                    let names: Vec<String> = core.iter().map(|&i| named[i].name.clone()).collect();
                    r.fail("UNSAFE");
                    r.line(format!(
                        "unsafe at ({}, {}): {{{}}} violate {}",
                        witness.object,
                        witness.time,
                        names.join(","),
                        witness.instance
                    ));
                    r.set("core", names);
                }
            }
            r.set("verdict", serde_json::to_value(&v).expect("serializes"));
        }),
        EthicsOp::Filter => build_violation_hypergraph(named, &ec, &sig, cli.kmax.get(), budget).and_then(|h| {
            let safe = max_safe_subset(&h, cli.mode.into(), budget)?;
            let rejected: Vec<usize> = (0..h.vertices.len()).filter(|i| !safe.members.contains(i)).collect();
            r.line(format!("kept: {{{}}}", safe.names.join(",")));
            r.line(format!("rejected: {{{}}}", h.names(&rejected).join(",")));
            r.set("mode", serde_json::to_value(cli.mode_solve()).expect("serializes"))
                .set("hypergraph", h.to_json_value())
                .set("kept", safe.names.clone())
                .set("rejected", h.names(&rejected))
                .set("added_edges", edges_json(&h, &safe.added_edges));
            Ok(())
        }),
        EthicsOp::Safeguard => {
            inject_safeguard(named, &ec, &sig, cli.mode.into(), cli.kmax.get(), budget).map(|g| {
                let h = &g.hypergraph;
                let routes: Vec<Value> = (0..h.vertices.len())
                    .map(|i| json!({"name": h.vertices[i].name, "emits": format_formula(&g.route(i))}))
                    .collect();
                r.line(format!("kept: {{{}}}", g.safe.names.join(",")));
                r.line(format!("rejected: {{{}}}", h.names(&g.rejected).join(",")));
                r.line(format!("safeguard: {}", format_formula(&g.safeguard_formula)));
                if !g.augmented_verdict.is_safe() {
                    r.fail("UNSAFE");
                }
                r.set("mode", serde_json::to_value(cli.mode_solve()).expect("serializes"))
                    .set("hypergraph", h.to_json_value())
                    .set("kept", g.safe.names.clone())
                    .set("rejected", h.names(&g.rejected))
                    .set("prompt", format_formula(&g.prompt()))
                    .set("safeguard_formula", format_formula(&g.safeguard_formula))
                    .set("augmented_output", texts(&g.augmented_output))
                    .set("routes", routes)
                    .set("augmented_verdict", serde_json::to_value(&g.augmented_verdict).expect("serializes"));
            })
        }
    };
    match result {
        Ok(()) => Ok(r),
        Err(EthicsError::ConstraintAlwaysViolated { object, time }) => {
            r.fail("CONSTRAINT_ALWAYS_VIOLATED");
            r.line(format!("the constraint fails at ({object}, {time}) whatever is output"));
            Ok(r)
        }
        Err(e) => Err(e.into()),
    }
}

impl Cli {
    fn mode_solve(&self) -> mltmf_core::ethics::SolveMode {
        self.mode.into()
    }
}

fn genbound(cli: &Cli, model: &Path, query: &Path, float: bool, strict: bool) -> Outcome {
    let base = LogBase::parse(&cli.log_base)
        .ok_or_else(|| CliError::input("BAD_LOG_BASE", format!("unknown log base `{}`; use `e` or `2`", cli.log_base)))?;
    let exact = !float;
    let m = read_json(model)?;
    let states: Vec<String> = m
        .get("states")
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|s| s.as_str().map(str::to_string)).collect())
        .ok_or_else(|| CliError::input("MALFORMED_INPUT", "model file needs a `states` list of names"))?;
    let p_q = FiniteDistribution::from_json_value(&read_json(query)?, exact)?;
    let strict_model = if strict {
        let d = m
            .get("distribution")
            .ok_or_else(|| CliError::input("MALFORMED_INPUT", "--strict needs a model `distribution`"))?;
        Some(FiniteDistribution::from_json_value(d, exact)?)
    } else {
        None
    };
    let s_oq = p_q.labels().to_vec();
    let report = generalization_bound(&states, &s_oq, &p_q, &BoundOptions { base, strict_model })?;
    let p_m = build_model_distribution(&states, &s_oq, &p_q)?;
    let tvd = tvd_oracle(&p_q, &p_m)?;
    let kl = kl_divergence(&p_q, &p_m, base)?;
    let mut r = Report::new("genbound");
    r.line(format!("bound: {}", report.bound));
    r.line(format!("branch: {}", serde_json::to_value(report.branch).expect("serializes").as_str().unwrap_or("")));
    r.line(format!("overlap mass: {}", report.components.stats.p_overlap));
    r.line(format!("tvd(query, model): {tvd}"));
    r.set("bound", serde_json::to_value(&report).expect("serializes"))
        .set("model_distribution", p_m.to_json_value())
        .set("kl_query_model", kl)
        .set("tvd", tvd)
        .set("tvd_exact", tvd_exact(&p_q, &p_m)?.map(|t| t.to_string()))
        .set("exact", exact);
    if !strict && tvd > report.bound + TOLERANCE {
        r.fail("BOUND_VIOLATED");
    }
    Ok(r)
}

fn interpret(model: &Path, input: &Path, output: &Path, rule_name: &str, budget: &QuantifierBudget) -> Outcome {
    let rule = process_rule(rule_name)?;
    let iu = SextupleDocument::load(model, budget)?.sextuple;
    let iq = SextupleDocument::load(input, budget)?.sextuple;
    let ir = SextupleDocument::load(output, budget)?.sextuple;
    let verdict = mltmf_core::info::check_interpretability(&iu, &iq, &ir, rule.as_ref(), budget)?;
    let mut r = Report::new("interpret");
    r.set("rule", rule_name).set("verdict", serde_json::to_value(&verdict).expect("serializes"));
    if verdict.is_interpretable() {
        r.line("interpretable");
    } else {
        for reason in verdict.reasons() {
            r.fail(reason.code());
        }
        r.line("not interpretable");
    }
    Ok(r)
}
