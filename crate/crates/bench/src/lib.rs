//! Seeded workloads shared by the benchmarks.

use mltmf_core::automaton::{random_run, FiniteAutomaton};
use mltmf_core::bound::{random_instance as bound_instance, FiniteDistribution};
use mltmf_core::ethics::{random_instance as ethics_instance, EthicalConstraint, NamedFormula};
use mltmf_core::logic::random::{FormulaGen, GenConfig};
use mltmf_core::{Signature, Wff};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Signature with constants, functions of arity 1 to 3 and predicates of arity 0 to 3.
pub fn rich_signature() -> Signature {
    Signature::from_json_str(
        r#"{"constants":["a","b","c"],"functions":{"f":1,"g":2,"h":3},"predicates":{"P":1,"Q":2,"R":0,"S":3}}"#,
    )
    .expect("valid signature")
}

/// `n` nullary predicates `A0..`.
pub fn letters(n: usize) -> Signature {
    let mut sig = Signature::new();
    for i in 0..n {
        sig.add_predicate(format!("A{i}"), 0).expect("fresh name");
    }
    sig
}

pub fn formulas(sig: &Signature, config: GenConfig, count: usize, seed: u64) -> Vec<Wff> {
    let gen = FormulaGen::new(sig, config);
    let mut r = rng(seed);
    (0..count).map(|_| gen.formula(&mut r)).collect()
}

/// Closed quantifier-free formulas over nullary predicates.
pub fn propositional(sig: &Signature, depth: usize, count: usize, seed: u64) -> Vec<Wff> {
    let config = GenConfig { max_depth: depth, variables: vec![], higher_order: false, closed: true, ..GenConfig::default() };
    formulas(sig, config, count, seed)
}

pub fn automaton_run(seed: u64) -> (FiniteAutomaton, String, Vec<String>) {
    random_run(&mut rng(seed), 4, 4, 4, 6)
}

pub fn ethics_case(max_vertices: usize, seed: u64) -> (Signature, Vec<NamedFormula>, EthicalConstraint) {
    ethics_instance(&mut rng(seed), max_vertices)
}

pub fn bound_cases(count: usize, seed: u64) -> Vec<(Vec<String>, Vec<String>, FiniteDistribution)> {
    let mut r = rng(seed);
    (0..count).map(|_| bound_instance(&mut r, 10)).collect()
}
