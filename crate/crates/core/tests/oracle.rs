mod common;

use common::{
    brute_force_benchmark, certificate_proves_infeasible, feasible_instance, random_family,
    singleton_instance,
};
use fair_cmab::oracle::{max_slack, max_slack_value, singleton_closed_form, singleton_max_slack};
use fair_cmab::{solve_benchmark, Error, FamilySpec, FeasibleFamily, Instance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn lp_matches_singleton_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.random_range(2..=12);
        let load = rng.random_range(0.05..0.95);
        let inst = singleton_instance(&mut rng, n, load);
        let delta = rng.random_range(0.0..0.5) * singleton_max_slack(inst.means(), inst.targets());
        let lp = solve_benchmark(&inst, delta).unwrap();
        let exact = singleton_closed_form(inst.means(), inst.targets(), delta).unwrap();
        assert!((lp.optimal_reward - exact).abs() < 1e-9, "{} vs {exact}", lp.optimal_reward);
        let total: f64 = lp.distribution.iter().sum();
        assert!((total - 1.0).abs() < 1e-9);
    }
}

#[test]
fn lp_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let n = rng.random_range(2..=5);
        let family = random_family(&mut rng, n, 12);
        assert!(family.len() <= 12);
        let inst = feasible_instance(&mut rng, family);
        let lp = solve_benchmark(&inst, 0.0).unwrap();
        let reference = brute_force_benchmark(&inst, 0.0).unwrap();
        assert!((lp.optimal_reward - reference).abs() < 1e-9, "{} vs {reference}", lp.optimal_reward);
        for (n, (&m, &target)) in lp.marginals.iter().zip(inst.targets()).enumerate() {
            assert!(m * inst.means()[n] >= target - 1e-9);
        }
    }
}

#[test]
fn overloaded_singletons_are_infeasible_with_certificate() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.random_range(2..=10);
        let load = rng.random_range(0.3..0.9);
        let inst = singleton_instance(&mut rng, n, load);
        // Pick delta so that sum (lambda + delta) / mu lands above one.
        let delta = singleton_max_slack(inst.means(), inst.targets()) * rng.random_range(1.01..3.0);
        match solve_benchmark(&inst, delta) {
            Err(Error::Infeasible { certificate, .. }) => {
                assert!(certificate_proves_infeasible(&inst, delta, &certificate));
            }
            other => panic!("expected infeasibility, got {other:?}"),
        }
    }
}

#[test]
fn overloaded_targets_have_no_slack() {
    let family = FeasibleFamily::enumerate(&FamilySpec::Singletons, 3).unwrap();
    let inst = Instance::new(vec![0.5, 0.5, 0.5], vec![0.2, 0.2, 0.2], family).unwrap();
    assert!(matches!(max_slack(&inst), Err(Error::InfeasibleFairness { .. })));
    match solve_benchmark(&inst, 0.0) {
        Err(e @ Error::Infeasible { .. }) => {
            assert_eq!(e.exit_code(), 3);
            let Error::Infeasible { certificate, .. } = e else { unreachable!() };
            assert!(certificate_proves_infeasible(&inst, 0.0, &certificate));
        }
        other => panic!("expected infeasibility, got {other:?}"),
    }
}

#[test]
fn max_slack_matches_closed_form_and_shrinks_with_targets() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..30 {
        let n = rng.random_range(2..=8);
        let load = rng.random_range(0.05..0.4);
        let inst = singleton_instance(&mut rng, n, load);
        let d = max_slack_value(&inst).unwrap();
        assert!((d - singleton_max_slack(inst.means(), inst.targets())).abs() < 1e-9);
        let doubled: Vec<f64> = inst.targets().iter().map(|l| 2.0 * l).collect();
        let inst2 = Instance::new(inst.means().to_vec(), doubled, inst.family().clone()).unwrap();
        assert!(max_slack_value(&inst2).unwrap() < d);
    }
}

#[test]
fn benchmark_at_max_slack_is_just_feasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..20 {
        let n = rng.random_range(2..=5);
        let family = random_family(&mut rng, n, 10);
        let inst = feasible_instance(&mut rng, family);
        let d = max_slack(&inst).unwrap();
        assert!(solve_benchmark(&inst, d * (1.0 - 1e-9)).is_ok());
        assert!(matches!(solve_benchmark(&inst, d + 1e-6), Err(Error::Infeasible { .. })));
    }
}
