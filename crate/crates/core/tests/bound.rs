use mltmf_core::bound::{
    build_model_distribution, generalization_bound, kl_divergence, labels, overlap_stats, random_instance, tvd_exact,
    tvd_oracle, BoundBranch, BoundOptions, FiniteDistribution, LogBase,
};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// The model distribution and the divergence written out by hand.
fn oracle(s_ou: &[String], s_oq: &[String], p: &FiniteDistribution) -> (Vec<f64>, f64, f64) {
    let on = |l: &String| s_ou.contains(l);
    let p_overlap: f64 = s_oq.iter().filter(|l| on(l)).map(|l| p.mass(l).unwrap()).sum();
    let gap = s_oq.iter().filter(|l| !on(l)).count();
    let pm: Vec<f64> = s_oq
        .iter()
        .map(|l| if on(l) { p.mass(l).unwrap() } else { ((1.0 - p_overlap) / gap as f64).max(0.0) })
        .collect();
    let kl: f64 = s_oq
        .iter()
        .zip(&pm)
        .map(|(l, q)| {
            let x = p.mass(l).unwrap();
            if x == 0.0 {
                0.0
            } else {
                x * (x / q).ln()
            }
        })
        .sum();
    let tvd = 0.5 * s_oq.iter().zip(&pm).map(|(l, q)| (p.mass(l).unwrap() - q).abs()).sum::<f64>();
    (pm, kl, tvd)
}

#[test]
fn thousand_instances_respect_pinsker() {
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    let opts = BoundOptions::default();
    for _ in 0..1000 {
        let (s_ou, s_oq, p) = random_instance(&mut rng, 10);
        let r = generalization_bound(&s_ou, &s_oq, &p, &opts).unwrap();
        let pm = build_model_distribution(&s_ou, &s_oq, &p).unwrap();
        let (expected_pm, kl, tvd) = oracle(&s_ou, &s_oq, &p);
        for (l, e) in s_oq.iter().zip(&expected_pm) {
            assert!((pm.mass(l).unwrap() - e).abs() < 1e-12);
        }
        let t = tvd_oracle(&p, &pm).unwrap();
        assert!((t - tvd).abs() < 1e-12);
        assert!(t <= r.bound + 1e-12, "tvd {t} above bound {}", r.bound);
        assert!(r.components.radicand >= -1e-12);
        assert!(r.components.coverage_term >= r.components.stats.h_nonoverlap - 1e-12);
        assert!((r.components.nonoverlap_kl - kl).abs() < 1e-12);
        assert!((kl_divergence(&p, &pm, LogBase::Natural).unwrap() - kl).abs() < 1e-12);
        if r.branch == BoundBranch::Subset {
            assert_eq!(r.bound, 0.0);
        }
    }
}

#[test]
fn enlarging_coverage_never_raises_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let opts = BoundOptions::default();
    for _ in 0..300 {
        let (mut s_ou, s_oq, p) = random_instance(&mut rng, 10);
        let mut last = generalization_bound(&s_ou, &s_oq, &p, &opts).unwrap().bound;
        for l in &s_oq {
            if !s_ou.contains(l) && rng.random_bool(0.6) {
                s_ou.push(l.clone());
                let b = generalization_bound(&s_ou, &s_oq, &p, &opts).unwrap().bound;
                assert!(b <= last + 1e-12, "{b} > {last}");
                last = b;
            }
        }
    }
}

#[test]
fn worked_example() {
    let q = labels(&["s1", "s2", "s3", "s4"]);
    let p = FiniteDistribution::from_json_value(
        &serde_json::json!({"support": q, "mass": {"s1": 0.4, "s2": 0.4, "s3": 0.15, "s4": 0.05}}),
        true,
    )
    .unwrap();
    let u = labels(&["s1", "s2"]);
    let stats = overlap_stats(&u, &q, &p, LogBase::Natural).unwrap();
    assert!((stats.p_overlap - 0.8).abs() < 1e-15);
    assert!((stats.h_nonoverlap - 0.434355).abs() < 1e-6);
    let pm = build_model_distribution(&u, &q, &p).unwrap();
    let kl = kl_divergence(&p, &pm, LogBase::Natural).unwrap();
    assert!((kl - (0.2 * 10f64.ln() - stats.h_nonoverlap)).abs() < 1e-12);
    assert!((kl - 0.026162).abs() < 1e-6);
    let r = generalization_bound(&u, &q, &p, &BoundOptions::default()).unwrap();
    assert!((r.bound - 0.114373).abs() < 1e-6);
    assert!((r.bound - (kl / 2.0).sqrt()).abs() < 1e-12);
    assert_eq!(tvd_exact(&p, &pm).unwrap().unwrap().to_f64(), Some(0.05));
    let bits = generalization_bound(&u, &q, &p, &BoundOptions { base: LogBase::Two, strict_model: None }).unwrap();
    assert!((bits.components.nonoverlap_kl - kl / 2f64.ln()).abs() < 1e-12);
}

#[test]
fn float_mode_matches_exact_mode() {
    let mut rng = ChaCha8Rng::seed_from_u64(53);
    for _ in 0..200 {
        let (s_ou, s_oq, p) = random_instance(&mut rng, 10);
        let float = FiniteDistribution::float(s_oq.iter().map(|l| (l.clone(), p.mass(l).unwrap())).collect()).unwrap();
        let a = generalization_bound(&s_ou, &s_oq, &p, &BoundOptions::default()).unwrap();
        let b = generalization_bound(&s_ou, &s_oq, &float, &BoundOptions::default()).unwrap();
        assert!((a.bound - b.bound).abs() < 1e-6);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn subset_queries_bound_to_zero(weights in prop::collection::vec(1u32..50, 1..8), extra in 0usize..3) {
        let total: u32 = weights.iter().sum();
        let q: Vec<String> = (0..weights.len()).map(|i| format!("s{i}")).collect();
        let p = FiniteDistribution::exact(
            q.iter().zip(&weights).map(|(l, &w)| (l.clone(), num_rational::BigRational::new(w.into(), total.into()))).collect(),
        ).unwrap();
        let mut u = q.clone();
        u.extend((0..extra).map(|i| format!("x{i}")));
        let r = generalization_bound(&u, &q, &p, &BoundOptions::default()).unwrap();
        prop_assert_eq!(r.branch, BoundBranch::Subset);
        prop_assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn tvd_is_symmetric_and_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (s_ou, s_oq, p) = random_instance(&mut rng, 10);
        let pm = build_model_distribution(&s_ou, &s_oq, &p).unwrap();
        let a = tvd_oracle(&p, &pm).unwrap();
        prop_assert_eq!(a, tvd_oracle(&pm, &p).unwrap());
        prop_assert!((0.0..=1.0).contains(&a));
    }
}
