//! Runs pick-and-compare next to its limiting variants on the ten-arm
//! study: direct argmax over the whole family, queues only, and UCB only.
//!
//! cargo run --release --example policy_variants [horizon]

use fair_cmab::experiment::{run, ExperimentConfig, RunOptions};
use fair_cmab::{PolicyConfig, Variant};

fn main() -> fair_cmab::Result<()> {
    let mut cfg = ExperimentConfig::synthetic_default();
    cfg.horizon = std::env::args()
        .nth(1)
        .map_or(50_000, |h| h.parse().expect("horizon must be an integer"));
    cfg.replications = 8;
    cfg.diagnostics = Default::default();
    let base = PolicyConfig::lcfl(100.0, 1e-5, 3);
    cfg.sweep = vec![
        base,
        base.with_variant(Variant::PessimisticOptimistic),
        base.with_variant(Variant::QueuePc),
        base.with_variant(Variant::UcbPc),
    ];
    let summary = run(
        &cfg,
        &RunOptions {
            dry_run: true,
            ..Default::default()
        },
    )?;
    println!("T = {}, {} replications", cfg.horizon, cfg.replications);
    println!(
        "{:<40} {:>12} {:>16} {:>12}",
        "entry", "regret", "final violation", "evaluations"
    );
    for e in &summary.entries {
        println!(
            "{:<40} {:>12.1} {:>16.2} {:>12}",
            e.label, e.final_regret_mean, e.final_violation_mean_service, e.comparisons_per_replication
        );
    }
    Ok(())
}
