//! Propositional helpers shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use mltmf_core::logic::random::{FormulaGen, GenConfig};
use mltmf_core::{Signature, Wff};
use rand::Rng;

pub const LETTERS: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];

pub fn prop_sig(n: usize) -> Signature {
    let mut sig = Signature::new();
    for p in &LETTERS[..n] {
        sig.add_predicate(*p, 0).unwrap();
    }
    sig
}

pub fn prop_gen(sig: &Signature, depth: usize) -> FormulaGen<'_> {
    FormulaGen::new(
        sig,
        GenConfig { max_depth: depth, variables: vec![], higher_order: false, closed: true, ..GenConfig::default() },
    )
}

/// Classical truth of a quantifier-free formula whose atoms are looked up by printed form.
pub fn truth(f: &Wff, v: &BTreeMap<String, bool>) -> bool {
    match f {
        Wff::Atom(..) => v[&mltmf_core::format_formula(f)],
        Wff::Not(a) => !truth(a, v),
        Wff::Implies(a, b) => !truth(a, v) || truth(b, v),
        Wff::And(a, b) => truth(a, v) && truth(b, v),
        Wff::Or(a, b) => truth(a, v) || truth(b, v),
        Wff::Iff(a, b) => truth(a, v) == truth(b, v),
        Wff::ForAll(..) | Wff::Exists(..) => panic!("quantifier in a propositional formula"),
    }
}

/// Every assignment to `atoms`.
pub fn assignments(atoms: &[String]) -> Vec<BTreeMap<String, bool>> {
    (0u32..1 << atoms.len())
        .map(|bits| atoms.iter().enumerate().map(|(i, a)| (a.clone(), bits & 1 << i != 0)).collect())
        .collect()
}

pub fn letters(n: usize) -> Vec<String> {
    LETTERS[..n].iter().map(|s| s.to_string()).collect()
}

/// A random formula over the first `n` letters that is true under `v`.
pub fn true_formula<R: Rng + ?Sized>(gen: &FormulaGen<'_>, v: &BTreeMap<String, bool>, rng: &mut R) -> Wff {
    loop {
        let f = gen.formula(rng);
        if truth(&f, v) {
            return f;
        }
    }
}
