//! Drives the pick-and-compare policy by hand on a small family of arm
//! pairs and prints its queues and UCB estimates as they evolve.
//!
//! cargo run --example step_by_step

use fair_cmab::{lcfl_step, FamilySpec, FeasibleFamily, Instance, PolicyConfig, PolicyState, RewardStream};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fmt(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:6.3}")).collect::<Vec<_>>().join(" ")
}

fn main() -> fair_cmab::Result<()> {
    let family = FeasibleFamily::enumerate(&FamilySpec::KSubsets { k: 2 }, 4)?;
    let instance = Instance::new(vec![0.9, 0.7, 0.4, 0.2], vec![0.1, 0.1, 0.2, 0.15], family)?;
    let cfg = PolicyConfig::lcfl(20.0, 1e-3, 2);
    let mut state = PolicyState::new(4);
    let mut rewards = RewardStream::new(7, 0, 4);
    let mut sampler = ChaCha8Rng::seed_from_u64(7);

    for t in 0..5_000u64 {
        let out = lcfl_step(&mut state, &instance, &cfg, &mut rewards, &mut sampler)?;
        if t < 6 || (t + 1) % 1000 == 0 {
            let chosen = instance.family().members()[out.selected].arms();
            println!(
                "round {:>5}: sampled {:?} chose {:?}  Q [{}]  w [{}]",
                t + 1,
                out.sampled,
                chosen,
                fmt(&state.queues),
                fmt(&state.ucb)
            );
        }
    }
    let rounds = state.round as f64;
    for a in 0..4 {
        println!(
            "arm {a}: pulled {:>5} times, reward rate {:.3} (target {:.2})",
            state.pulls[a],
            state.reward_sums[a] as f64 / rounds,
            instance.targets()[a]
        );
    }
    Ok(())
}
