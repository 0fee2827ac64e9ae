//! One replication with shadow diagnostics on: best-pick gaps, the queue
//! gap to the queue-only argmax, and the UCB drift check.
//!
//! cargo run --release --example lemma_diagnostics [M]

use fair_cmab::bounds::{c1, max_gap_bound};
use fair_cmab::experiment::{simulate_replication, Diagnostics, ExperimentConfig};
use fair_cmab::metrics::{best_pick_statistics, lemma3_gap_frequency};
use fair_cmab::oracle::max_slack;
use fair_cmab::{compute_bounds, PolicyConfig};

fn main() -> fair_cmab::Result<()> {
    let m = std::env::args()
        .nth(1)
        .map_or(3, |m| m.parse().expect("M must be an integer"));
    let horizon = 100_000;
    let instance = ExperimentConfig::synthetic_default().validate()?;
    let cfg = PolicyConfig::lcfl(100.0, 1e-5, m);
    let bounds = compute_bounds(&instance, &cfg, horizon, max_slack(&instance)?)?;
    let diag = Diagnostics {
        shadow_argmax: true,
        lemma2_assert: true,
    };
    let trace = simulate_replication(&instance, &cfg, horizon, 1, 0, diag)?;

    let stats = best_pick_statistics(&trace)?;
    let alpha = bounds.alpha;
    println!("M = {m}, alpha = {alpha:.2}");
    println!("best-pick rate       {:.5}  (alpha {alpha:.5})", stats.inclusion_rate);
    println!("mean gap             {:.4}  (1/alpha {:.4})", stats.gap_mean, 1.0 / alpha);
    println!("E[(gap - 1)^2]       {:.4}  (C1 {:.4})", stats.gap_second_moment, c1(alpha));
    println!("largest gap          {}  (bound {:.1})", stats.gap_max, max_gap_bound(alpha, horizon));
    println!(
        "queue gap <= B1      {:.5} of rounds  (gamma {:.5}, B1 {:.0})",
        lemma3_gap_frequency(&trace, bounds.b1)?,
        bounds.gamma.unwrap_or(f64::NAN),
        bounds.b1
    );
    println!(
        "UCB drift violations {}",
        trace.lemma2_violations.as_ref().map_or(0, Vec::len)
    );
    Ok(())
}
