mod common;

use std::collections::BTreeMap;

use common::truth;
use mltmf_core::ethics::{
    build_violation_hypergraph, check_ethical_safety, inject_safeguard, max_safe_subset, random_instance,
    EthicalConstraint, EthicsError, NamedFormula, SolveMode,
};
use mltmf_core::{format_formula, QuantifierBudget, Wff};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ATOMS: [&str; 5] = ["A", "B", "C", "P(a)", "P(b)"];

/// Safety by truth tables: for each grounded instance some assignment satisfies the set
/// together with the instance.
struct TruthOracle {
    /// Per assignment, the bitmask of vertices it satisfies.
    vertex_masks: Vec<u32>,
    /// Per instance, the assignments satisfying it.
    instance_ok: Vec<Vec<bool>>,
}

impl TruthOracle {
    fn new(vertices: &[NamedFormula], ec: &EthicalConstraint) -> Self {
        let table: Vec<BTreeMap<String, bool>> = (0u32..32)
            .map(|bits| ATOMS.iter().enumerate().map(|(i, a)| (a.to_string(), bits & 1 << i != 0)).collect())
            .collect();
        let vertex_masks = table
            .iter()
            .map(|a| vertices.iter().enumerate().fold(0, |m, (i, v)| if truth(&v.formula, a) { m | 1 << i } else { m }))
            .collect();
        let instance_ok = (0..ec.grounding().len())
            .map(|k| table.iter().map(|a| truth(&ec.instance_at(k), a)).collect())
            .collect();
        TruthOracle { vertex_masks, instance_ok }
    }

    fn safe(&self, mask: u32) -> bool {
        self.instance_ok
            .iter()
            .all(|ok| self.vertex_masks.iter().zip(ok).any(|(&vm, &o)| o && vm & mask == mask))
    }

    fn always_violated(&self) -> bool {
        !self.safe(0)
    }

    fn brute_force_max(&self, n: usize) -> usize {
        (0u32..1 << n).filter(|&m| self.safe(m)).map(u32::count_ones).max().unwrap() as usize
    }
}

fn mask(members: &[usize]) -> u32 {
    members.iter().fold(0, |m, &i| m | 1 << i)
}

#[test]
fn exact_subset_is_maximum_by_brute_force() {
    let budget = QuantifierBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let mut checked = 0;
    while checked < 60 {
        let (sig, vertices, ec) = random_instance(&mut rng, 9);
        let oracle = TruthOracle::new(&vertices, &ec);
        let n = vertices.len();
        let built = build_violation_hypergraph(vertices.clone(), &ec, &sig, 3, &budget);
        if oracle.always_violated() {
            assert!(matches!(built, Err(EthicsError::ConstraintAlwaysViolated { .. })));
            continue;
        }
        let h = built.unwrap();
        for e in &h.edges {
            assert!(!oracle.safe(mask(&e.members)), "edge must violate");
            for drop in 0..e.members.len() {
                let mut sub = e.members.clone();
                sub.remove(drop);
                assert!(oracle.safe(mask(&sub)), "edge must be minimal");
            }
        }
        let exact = max_safe_subset(&h, SolveMode::Exact, &budget).unwrap();
        assert!(oracle.safe(mask(&exact.members)));
        assert_eq!(exact.members.len(), oracle.brute_force_max(n));
        let greedy = max_safe_subset(&h, SolveMode::Greedy, &budget).unwrap();
        assert!(oracle.safe(mask(&greedy.members)));
        assert!(greedy.members.len() <= exact.members.len());
        for _ in 0..5 {
            let sub: Vec<usize> = exact.members.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            assert!(oracle.safe(mask(&sub)));
        }
        let guarded = inject_safeguard(vertices, &ec, &sig, SolveMode::Exact, 3, &budget).unwrap();
        assert!(guarded.augmented_verdict.is_safe());
        let prompt = guarded.prompt();
        assert_eq!(guarded.augmented_output.last(), Some(&prompt));
        let mut all: Vec<usize> = guarded.safe.members.iter().chain(&guarded.rejected).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..n).collect::<Vec<_>>());
        checked += 1;
    }
}

#[test]
fn safety_check_agrees_with_truth_tables_on_every_subset() {
    let budget = QuantifierBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..12 {
        let (sig, vertices, ec) = random_instance(&mut rng, 5);
        let oracle = TruthOracle::new(&vertices, &ec);
        for m in 0u32..1 << vertices.len() {
            let fs: Vec<Wff> =
                (0..vertices.len()).filter(|i| m & 1 << i != 0).map(|i| vertices[i].formula.clone()).collect();
            let verdict = check_ethical_safety(&fs, &ec, &sig, &budget).unwrap();
            assert_eq!(verdict.is_safe(), oracle.safe(m), "{:?}", fs.iter().map(format_formula).collect::<Vec<_>>());
        }
    }
}

#[test]
fn tiny_k_max_does_not_change_the_answer() {
    let budget = QuantifierBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut done = 0;
    while done < 20 {
        let (sig, vertices, ec) = random_instance(&mut rng, 7);
        if TruthOracle::new(&vertices, &ec).always_violated() {
            continue;
        }
        let full = build_violation_hypergraph(vertices.clone(), &ec, &sig, vertices.len(), &budget).unwrap();
        assert!(full.complete);
        let thin = build_violation_hypergraph(vertices, &ec, &sig, 1, &budget).unwrap();
        let a = max_safe_subset(&full, SolveMode::Exact, &budget).unwrap();
        let b = max_safe_subset(&thin, SolveMode::Exact, &budget).unwrap();
        assert_eq!(a.members, b.members);
        done += 1;
    }
}

#[test]
fn exact_mode_size_limit() {
    let budget = QuantifierBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let (sig, _, ec) = random_instance(&mut rng, 1);
    let vertices: Vec<NamedFormula> =
        (0..26).map(|i| NamedFormula { name: format!("v{i:02}"), formula: Wff::prop("C") }).collect();
    if TruthOracle::new(&vertices, &ec).always_violated() {
        return;
    }
    let h = build_violation_hypergraph(vertices, &ec, &sig, 1, &budget).unwrap();
    assert!(matches!(max_safe_subset(&h, SolveMode::Exact, &budget), Err(EthicsError::TooLargeForExact { .. })));
    assert!(max_safe_subset(&h, SolveMode::Greedy, &budget).is_ok());
}
