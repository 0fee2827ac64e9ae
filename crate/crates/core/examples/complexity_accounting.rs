//! Counts weight evaluations and wall time per round on the 792 five-arm
//! subsets of twelve arms, pick-and-compare against direct argmax.
//!
//! cargo run --release --example complexity_accounting

use std::time::Instant;

use fair_cmab::{
    lcfl_step, FamilySpec, FeasibleFamily, Instance, PolicyConfig, PolicyState, RewardStream, Variant,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fair_cmab::Result<()> {
    let family = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k: 5 }, 12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let means: Vec<f64> = (0..12).map(|_| rng.random_range(0.3..1.0)).collect();
    let instance = Instance::new(means, vec![0.1; 12], family)?;
    let rounds = 20_000;
    let lcfl = PolicyConfig::lcfl(10.0, 1e-3, 4);

    for cfg in [lcfl, lcfl.with_variant(Variant::PessimisticOptimistic)] {
        let mut state = PolicyState::new(12);
        let mut rewards = RewardStream::new(3, 0, 12);
        let mut evaluations = 0;
        let start = Instant::now();
        for _ in 0..rounds {
            evaluations += lcfl_step(&mut state, &instance, &cfg, &mut rewards, &mut rng)?.comparisons;
        }
        let per_round = start.elapsed().as_secs_f64() / rounds as f64;
        println!(
            "{:<24} {:>4} evaluations/round, {:>8.2} us/round",
            cfg.variant.label(),
            evaluations / rounds,
            per_round * 1e6
        );
    }
    Ok(())
}
