#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

/// Name, arguments and expected exit code of every shipped-fixture run with a golden report.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("check_self_application", &["check", "--sig", "fixtures/logic/sig.json", "P(P(x))"], 2),
    (
        "check_valid",
        &["check", "--sig", "fixtures/logic/sig.json", "forall x. P(x) -> exists y. Q(x, y)", "P(f(a))"],
        0,
    ),
    ("entail_mortal", &["entail", "--formulas", "fixtures/logic/kb.json", "--goal", "Mortal(socrates)"], 0),
    ("entail_not", &["entail", "--formulas", "fixtures/logic/kb.json", "--goal", "Mortal(a)"], 1),
    ("consistency_conflict", &["consistency", "--formulas", "fixtures/logic/conflict.json"], 1),
    ("consistency_kb", &["consistency", "--formulas", "fixtures/logic/kb.json"], 0),
    ("sextuple_noiseless", &["sextuple", "fixtures/info/shannon_noiseless.json"], 0),
    ("sextuple_many_to_one", &["sextuple", "fixtures/info/many_to_one.json"], 1),
    ("sextuple_reduce", &["sextuple", "fixtures/info/many_to_one.json", "--reduce"], 0),
    ("noise_shannon", &["noise", "fixtures/info/shannon_noisy.json", "--trials", "20"], 0),
    (
        "automaton_simulate",
        &["automaton", "simulate", "--machine", "fixtures/automaton/parity.json", "--initial", "even", "--word", "b1,b0,b1,b1"],
        0,
    ),
    (
        "automaton_encode",
        &["automaton", "encode", "--machine", "fixtures/automaton/parity.json", "--initial", "even", "--word", "b1,b0"],
        0,
    ),
    (
        "automaton_verify",
        &["automaton", "verify", "--machine", "fixtures/automaton/parity.json", "--initial", "even", "--word", "b1,b0,b1,b1"],
        0,
    ),
    (
        "automaton_verify_sampled",
        &[
            "automaton", "verify", "--machine", "fixtures/automaton/parity.json", "--initial", "even", "--word",
            "b1,b0,b1,b1", "--mutations", "6",
        ],
        0,
    ),
    (
        "automaton_claim",
        &[
            "automaton", "verify", "--machine", "fixtures/automaton/parity.json", "--initial", "even", "--word",
            "b1,b0,b1,b1", "--claim", "fixtures/automaton/claim_wrong.json",
        ],
        1,
    ),
    (
        "learn_union",
        &["learn", "--rule", "fact_union", "--learner", "fixtures/learn/facts_x.json", "--teacher", "fixtures/learn/facts_y.json"],
        0,
    ),
    (
        "learn_union_conflict",
        &[
            "learn", "--rule", "fact_union", "--learner", "fixtures/learn/facts_x.json", "--teacher",
            "fixtures/learn/facts_conflict.json",
        ],
        1,
    ),
    (
        "learn_toy",
        &[
            "learn", "--rule", "toy_gradient", "--learner", "fixtures/learn/toy_model.json", "--teacher",
            "fixtures/learn/toy_batch.json",
        ],
        0,
    ),
    (
        "learn_toy_wide",
        &[
            "learn", "--rule", "toy_gradient", "--learner", "fixtures/learn/toy_model.json", "--teacher",
            "fixtures/learn/toy_batch_wide.json",
        ],
        1,
    ),
    (
        "process_toy",
        &["process", "--rule", "toy_predict", "--model", "fixtures/learn/toy_model.json", "--query", "fixtures/learn/toy_query.json"],
        0,
    ),
    (
        "process_facts",
        &["process", "--rule", "fact_query", "--model", "fixtures/learn/facts_x.json", "--query", "fixtures/learn/fact_query.json"],
        0,
    ),
    (
        "ethics_exact",
        &["ethics", "--formulas", "fixtures/ethics/outputs.json", "--constraint", "fixtures/ethics/constraint.json", "--mode", "exact"],
        0,
    ),
    (
        "ethics_greedy",
        &["ethics", "--formulas", "fixtures/ethics/outputs.json", "--constraint", "fixtures/ethics/constraint.json", "--mode", "greedy"],
        0,
    ),
    (
        "ethics_safety_unsafe",
        &["ethics", "--formulas", "fixtures/ethics/outputs.json", "--constraint", "fixtures/ethics/constraint.json", "--op", "safety"],
        1,
    ),
    (
        "ethics_safety_safe",
        &[
            "ethics", "--formulas", "fixtures/ethics/safe_outputs.json", "--constraint", "fixtures/ethics/constraint.json", "--op",
            "safety",
        ],
        0,
    ),
    (
        "ethics_safeguard",
        &[
            "ethics", "--formulas", "fixtures/ethics/outputs.json", "--constraint", "fixtures/ethics/constraint.json", "--op",
            "safeguard",
        ],
        0,
    ),
    (
        "genbound_subset",
        &["genbound", "--model", "fixtures/genbound/model_subset.json", "--query", "fixtures/genbound/query_subset.json"],
        0,
    ),
    ("genbound", &["genbound", "--model", "fixtures/genbound/model.json", "--query", "fixtures/genbound/query.json"], 0),
    (
        "genbound_bits",
        &["genbound", "--model", "fixtures/genbound/model.json", "--query", "fixtures/genbound/query.json", "--log-base", "2"],
        0,
    ),
    (
        "genbound_strict",
        &["genbound", "--model", "fixtures/genbound/model.json", "--query", "fixtures/genbound/query.json", "--strict"],
        0,
    ),
    (
        "interpret",
        &[
            "interpret", "--model", "fixtures/interpret/model.json", "--input", "fixtures/interpret/input.json", "--output",
            "fixtures/interpret/output.json",
        ],
        0,
    ),
    (
        "interpret_lossy_model",
        &[
            "interpret", "--model", "fixtures/interpret/model_lossy.json", "--input", "fixtures/interpret/input.json", "--output",
            "fixtures/interpret/output.json",
        ],
        1,
    ),
];

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn fixture(rel: &str) -> PathBuf {
    manifest_dir().join("fixtures").join(rel)
}

pub fn golden_path(name: &str) -> PathBuf {
    manifest_dir().join("tests").join("golden").join(format!("{name}.json"))
}

/// Runs the binary from the crate directory; returns stdout, stderr and the exit code.
pub fn run(args: &[&str]) -> (String, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_mltmf"))
        .args(args)
        .current_dir(manifest_dir())
        .env("MLTMF_NO_COLOR", "1")
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
        out.status.code().unwrap_or(-1),
    )
}

pub fn run_json(args: &[&str]) -> (String, i32) {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--format", "json"]);
    let (out, _, code) = run(&all);
    (out, code)
}

/// With `MLTMF_BLESS` set, missing or stale golden files are rewritten instead of compared.
pub fn blessing() -> bool {
    std::env::var_os("MLTMF_BLESS").is_some()
}

pub fn read_golden(path: &Path) -> Option<String> {
    std::fs::read_to_string(path).ok()
}
