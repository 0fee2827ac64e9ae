mod common;

use common::{feasible_instance, random_family};
use fair_cmab::experiment::{simulate_replication, Diagnostics};
use fair_cmab::metrics::{best_pick_gaps, zero_violation_point};
use fair_cmab::policy::StepScratch;
use fair_cmab::{
    full_argmax, lcfl_step, queue_update, ucb_weight, FamilySpec, FeasibleFamily, PolicyConfig,
    PolicyState, RewardStream, Variant,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn brute_independent_sets(n: usize, edges: &[[usize; 2]], max_size: Option<usize>) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|&a| mask >> a & 1 == 1).collect::<Vec<_>>())
        .filter(|s| max_size.is_none_or(|k| s.len() <= k))
        .filter(|s| !edges.iter().any(|[u, v]| s.contains(u) && s.contains(v)))
        .collect();
    out.sort();
    out
}

fn graph() -> impl Strategy<Value = (usize, Vec<[usize; 2]>, Option<usize>)> {
    (2usize..=12).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec((0..n, 0..n), 0..2 * n).prop_map(|es| {
                es.into_iter().filter(|(u, v)| u != v).map(|(u, v)| [u, v]).collect()
            }),
            prop::option::of(1..=n),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn independent_sets_match_brute_force((n, edges, max_size) in graph()) {
        let spec = FamilySpec::IndependentSets { edges: edges.clone(), max_size };
        let family = FeasibleFamily::enumerate(&spec, n).unwrap();
        let got: Vec<Vec<usize>> = family.members().iter().map(|s| s.arms().to_vec()).collect();
        prop_assert_eq!(got, brute_independent_sets(n, &edges, max_size));
        for (i, s) in family.members().iter().enumerate() {
            prop_assert_eq!(s.index(), i);
        }
    }

    #[test]
    fn argmax_is_invariant_to_power_of_two_scaling(
        weights in prop::collection::vec(-50i32..50, 6),
        k in 1usize..=4,
        shift in -4i32..8,
    ) {
        let family = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k }, 6).unwrap();
        let w: Vec<f64> = weights.iter().map(|&v| f64::from(v)).collect();
        let scaled: Vec<f64> = w.iter().map(|v| v * 2f64.powi(shift)).collect();
        prop_assert_eq!(full_argmax(&family, &w), full_argmax(&family, &scaled));
    }

    #[test]
    fn raising_weights_inside_the_argmax_keeps_it(
        weights in prop::collection::vec(0i32..20, 7),
        bump in 1i32..10,
    ) {
        let family = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k: 3 }, 7).unwrap();
        let w: Vec<f64> = weights.iter().map(|&v| f64::from(v)).collect();
        let best = full_argmax(&family, &w);
        let mut raised = w.clone();
        for &a in family.members()[best].arms() {
            raised[a] += f64::from(bump);
        }
        prop_assert_eq!(full_argmax(&family, &raised), best);
    }

    #[test]
    fn queue_increment_is_bounded(
        q in 0.0f64..100.0,
        target in 0.0f64..1.0,
        pad in 0.0f64..0.1,
        pulled: bool,
        reward: bool,
    ) {
        let next = queue_update(q, target, pad, pulled, reward);
        prop_assert!(next >= 0.0);
        prop_assert!(next - q <= target + pad + 1e-12);
        prop_assert!(next - q >= -1.0 - 1e-12);
        if !(pulled && reward) {
            prop_assert!((next - (q + target + pad)).abs() < 1e-12);
        }
    }

    #[test]
    fn ucb_stays_in_unit_interval(pulls in 0u64..1000, frac in 0.0f64..=1.0, round in 0u64..1_000_000) {
        let sum = (pulls as f64 * frac).floor() as u64;
        let w = ucb_weight(pulls, sum, round);
        prop_assert!((0.0..=1.0).contains(&w));
        if pulls == 0 {
            prop_assert_eq!(w, 1.0);
        } else {
            prop_assert!(w >= sum as f64 / pulls as f64 - 1e-15);
        }
    }

    #[test]
    fn sample_distinct_returns_m_distinct_members(k in 1usize..=4, m_frac in 0.0f64..=1.0, seed: u64) {
        let family = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k }, 7).unwrap();
        let m = 1 + ((family.len() - 1) as f64 * m_frac) as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picks = family.sample_distinct(m, &mut rng).unwrap();
        prop_assert_eq!(picks.len(), m);
        picks.sort();
        picks.dedup();
        prop_assert_eq!(picks.len(), m);
        prop_assert!(picks.iter().all(|&i| i < family.len()));
    }

    #[test]
    fn state_invariants_hold_along_a_run(seed: u64, m in 1usize..=5, eta in 0.0f64..50.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = random_family(&mut rng, 5, 10);
        let inst = feasible_instance(&mut rng, family);
        let cfg = PolicyConfig::lcfl(eta, 1e-3, m.min(inst.family().len()));
        let mut state = PolicyState::new(5);
        let mut rewards = RewardStream::new(seed, 0, 5);
        for _ in 0..300 {
            let before = state.queues.clone();
            let out = lcfl_step(&mut state, &inst, &cfg, &mut rewards, &mut rng).unwrap();
            prop_assert_eq!(out.comparisons, cfg.m_picks as u64 + 1);
            for a in 0..5 {
                prop_assert!(state.reward_sums[a] <= state.pulls[a]);
                prop_assert!((0.0..=1.0).contains(&state.ucb[a]));
                if state.pulls[a] == 0 {
                    prop_assert_eq!(state.ucb[a], 1.0);
                }
                let d = state.queues[a] - before[a];
                prop_assert!(d <= inst.targets()[a] + 1e-3 + 1e-12 && d >= -1.0 - 1e-12);
            }
        }
    }

    #[test]
    fn full_sample_reduces_to_direct_argmax(seed: u64, eta in 0.0f64..200.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let family = random_family(&mut rng, 5, 12);
        let inst = feasible_instance(&mut rng, family);
        let size = inst.family().len();
        let lcfl = PolicyConfig::lcfl(eta, 1e-4, size);
        let direct = lcfl.with_variant(Variant::PessimisticOptimistic);
        let a = simulate_replication(&inst, &lcfl, 500, seed, 0, Diagnostics::default()).unwrap();
        let b = simulate_replication(&inst, &direct, 500, seed, 0, Diagnostics::default()).unwrap();
        prop_assert_eq!(a.selections, b.selections);
        prop_assert_eq!(a.served, b.served);
    }

    #[test]
    fn best_pick_gaps_partition_the_horizon(
        mut rounds in prop::collection::vec(0u64..500, 0..60),
        horizon in 1u64..500,
    ) {
        rounds.sort();
        rounds.dedup();
        let gaps = best_pick_gaps(&rounds, horizon);
        prop_assert_eq!(gaps.iter().sum::<u64>(), horizon);
        prop_assert!(gaps.iter().all(|&g| g >= 1));
        let inside = rounds.iter().filter(|&&t| t > 0 && t < horizon).count();
        prop_assert_eq!(gaps.len(), inside + 1);
    }

    #[test]
    fn zero_violation_point_is_exact(series in prop::collection::vec(prop::sample::select(vec![0.0, 0.5]), 1..40)) {
        match zero_violation_point(&series) {
            Some(t) => {
                prop_assert!(series[t as usize..].iter().all(|&v| v == 0.0));
                if t > 0 {
                    prop_assert!(series[t as usize - 1] > 0.0);
                }
            }
            None => prop_assert!(*series.last().unwrap() > 0.0),
        }
    }
}

#[test]
fn sample_distinct_inclusion_is_uniform() {
    let family = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k: 2 }, 6).unwrap();
    let (m, draws) = (4, 20_000);
    let mut counts = vec![0u64; family.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..draws {
        for i in family.sample_distinct(m, &mut rng).unwrap() {
            counts[i] += 1;
        }
    }
    let expected = draws as f64 * m as f64 / family.len() as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let critical = ChiSquared::new((family.len() - 1) as f64).unwrap().inverse_cdf(0.999);
    assert!(chi2 < critical, "chi2 = {chi2}, critical = {critical}");
}

#[test]
fn replications_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let family = random_family(&mut rng, 4, 8);
    let inst = feasible_instance(&mut rng, family);
    let cfg = PolicyConfig::lcfl(10.0, 1e-3, 2);
    let diag = Diagnostics { shadow_argmax: true, lemma2_assert: true };
    let a = simulate_replication(&inst, &cfg, 2_000, 5, 1, diag).unwrap();
    let b = simulate_replication(&inst, &cfg, 2_000, 5, 1, diag).unwrap();
    assert_eq!(a, b);
    let c = simulate_replication(&inst, &cfg, 2_000, 5, 2, diag).unwrap();
    assert_ne!(a.selections, c.selections);
}

#[test]
fn rewards_depend_only_on_arm_and_round() {
    let mut a = RewardStream::new(8, 3, 4);
    let mut b = RewardStream::new(8, 3, 4);
    let forward: Vec<u8> = (0..50).map(|t| a.bernoulli(t % 4, t as u64, 0.5)).collect();
    let backward: Vec<u8> = (0..50).rev().map(|t| b.bernoulli(t % 4, t as u64, 0.5)).collect();
    assert_eq!(forward, backward.into_iter().rev().collect::<Vec<_>>());
}

#[test]
fn scratch_step_matches_plain_step() {
    let family = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k: 2 }, 5).unwrap();
    let inst = fair_cmab::Instance::new(vec![0.5; 5], vec![0.05; 5], family).unwrap();
    let cfg = PolicyConfig::lcfl(5.0, 1e-3, 3);
    let (mut s1, mut s2) = (PolicyState::new(5), PolicyState::new(5));
    let (mut r1, mut r2) = (RewardStream::new(1, 0, 5), RewardStream::new(1, 0, 5));
    let (mut g1, mut g2) = (ChaCha8Rng::seed_from_u64(4), ChaCha8Rng::seed_from_u64(4));
    let mut scratch = StepScratch::default();
    for _ in 0..200 {
        let a = lcfl_step(&mut s1, &inst, &cfg, &mut r1, &mut g1).unwrap();
        let b = fair_cmab::policy::lcfl_step_with(&mut s2, &inst, &cfg, &mut r2, &mut g2, &mut scratch).unwrap();
        assert_eq!(a.selected, b.selected);
        assert_eq!(a.sampled, scratch.sampled());
    }
    assert_eq!(s1, s2);
}
