use mltmf_core::automaton::{
    apply_mutation, encode_automaton, mutations, phi_delta, phi_input, phi_state, random_run, recognize, simulate,
    verify_trace, AutomatonError, FiniteAutomaton, StepFormula,
};
use mltmf_core::model::{default_domain_size, entails};
use mltmf_core::{QuantifierBudget, Signature};
use proptest::prelude::*;
use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Step-by-step table lookups, independent of the library's simulator.
fn oracle_run(m: &FiniteAutomaton, initial: &str, word: &[String]) -> (Vec<String>, Vec<String>) {
    let mut u = initial.to_string();
    let mut states = vec![u.clone()];
    let mut outs = vec![];
    for q in word {
        let key = (u.clone(), q.clone());
        outs.push(m.out[&key].clone());
        u = m.next[&key].clone();
        states.push(u.clone());
    }
    (states, outs)
}

#[test]
fn hundred_random_automata_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let (m, initial, word) = random_run(&mut rng, 4, 4, 4, 6);
        let (states, outs) = oracle_run(&m, &initial, &word);
        let trace = simulate(&m, &initial, &word).unwrap();
        assert_eq!(trace.states, states);
        assert_eq!(trace.outputs, outs);
        let e = encode_automaton(&m, &initial, &word).unwrap();
        assert_eq!(e.formulas.len(), 1 + 5 * word.len());
        assert!(verify_trace(&e));
        assert!(e.state_set(&QuantifierBudget::default()).is_ok());
        let run = recognize(&e.formulas).unwrap();
        let expected: Vec<(String, String)> = m.times.iter().cloned().zip(states).collect();
        assert_eq!(run.states, expected);

        let all = mutations(&m, &e);
        for mu in &all {
            assert!(!verify_trace(&apply_mutation(&e, mu).unwrap()), "{mu:?} slipped through");
        }
        if let Some(mu) = all.choose(&mut rng) {
            assert!(!verify_trace(&apply_mutation(&e, mu).unwrap()));
        }
    }
}

#[test]
fn next_state_is_entailed() {
    let budget = QuantifierBudget::default();
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..20 {
        let (m, initial, word) = random_run(&mut rng, 3, 3, 2, 4);
        let e = encode_automaton(&m, &initial, &word).unwrap();
        for i in 0..word.len() {
            let pick = |k| e.formulas[e.formula_index(k, i).unwrap()].clone();
            let premises = vec![pick(StepFormula::State), pick(StepFormula::Input), pick(StepFormula::Delta)];
            let goal = e.formulas[e.formula_index(StepFormula::State, i + 1).unwrap()].clone();
            let mut all = premises.clone();
            all.push(goal.clone());
            let sig = Signature::infer(&all).unwrap();
            let size = default_domain_size(&sig, &all);
            assert!(entails(&premises, &goal, &sig, size, &budget).unwrap());
            // Without the transition formula the next state does not follow.
            assert!(!entails(&premises[..2], &goal, &sig, size, &budget).unwrap());
        }
    }
}

#[test]
fn step_formulas_have_the_documented_shape() {
    let f = phi_delta("t1", "u", "q", "t2", "v");
    let text = mltmf_core::format_formula(&f);
    assert_eq!(text, "State(M, t1, u) & Input(M, t1, q) -> Eq(v, delta(u, q)) & State(M, t2, v)");
    assert_eq!(mltmf_core::format_formula(&phi_input("t3", "q")), "Input(M, t3, q)");
    assert_eq!(mltmf_core::format_formula(&phi_state("t3", "u")), "State(M, t3, u)");
}

#[test]
fn bad_machines_are_rejected() {
    let v = serde_json::json!({
        "states": ["s"], "inputs": ["a"], "outputs": ["o"],
        "next": {"s,a": "s"}, "out": {"s,a": "o"}, "times": ["t1", "t1"]
    });
    assert_eq!(FiniteAutomaton::from_json_value(&v).unwrap_err(), AutomatonError::RepeatedTime("t1".into()));
    let v = serde_json::json!({
        "states": ["s"], "inputs": ["a"], "outputs": ["o"],
        "next": {"s,a": "z"}, "out": {"s,a": "o"}, "times": ["t1"]
    });
    assert!(matches!(FiniteAutomaton::from_json_value(&v), Err(AutomatonError::UnknownSymbol { .. })));
    let v = serde_json::json!({
        "states": ["M"], "inputs": ["a"], "outputs": ["o"],
        "next": {"M,a": "M"}, "out": {"M,a": "o"}, "times": ["t1"]
    });
    assert!(matches!(FiniteAutomaton::from_json_value(&v), Err(AutomatonError::NameClash { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip_and_word_limit(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (m, initial, word) = random_run(&mut rng, 4, 4, 4, 6);
        prop_assert_eq!(FiniteAutomaton::from_json_value(&m.to_json_value()).unwrap(), m.clone());
        let mut longer = word.clone();
        longer.push(m.inputs[0].clone());
        let too_long = encode_automaton(&m, &initial, &longer).unwrap_err();
        prop_assert!(matches!(too_long, AutomatonError::WordTooLong { .. }), "unexpected error: {:?}", too_long);
    }
}
