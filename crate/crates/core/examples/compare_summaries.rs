//! Runs two short sweeps on shared random numbers, saves both summaries and
//! checks the monotonicity trends across them.
//!
//! cargo run --release --example compare_summaries [out_dir]

use std::path::PathBuf;

use fair_cmab::experiment::{compare_policies, run, ExperimentConfig, ExperimentSummary, RunOptions};
use fair_cmab::PolicyConfig;

fn main() -> fair_cmab::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map_or_else(|| std::env::temp_dir().join("fair-cmab-compare"), PathBuf::from);
    let mut base = ExperimentConfig::synthetic_default();
    base.horizon = 20_000;
    base.replications = 10;
    base.diagnostics = Default::default();

    let mut paths = Vec::new();
    for (name, sweep) in [
        ("eta", vec![PolicyConfig::lcfl(1.0, 1e-5, 3), PolicyConfig::lcfl(10.0, 1e-5, 3)]),
        ("m", (1..=4).map(|m| PolicyConfig::lcfl(100.0, 1e-5, m)).collect()),
    ] {
        let mut cfg = base.clone();
        cfg.sweep = sweep;
        let dir = out.join(name);
        run(
            &cfg,
            &RunOptions {
                out_dir: Some(dir.clone()),
                ..Default::default()
            },
        )?;
        paths.push(dir.join("summary.json"));
    }

    let summaries = paths
        .iter()
        .map(|p| ExperimentSummary::load(p))
        .collect::<fair_cmab::Result<Vec<_>>>()?;
    let report = compare_policies(&summaries)?;
    for trend in &report.trends {
        println!("{:?} within {}", trend.parameter, trend.group);
        for s in &trend.steps {
            println!(
                "    {} -> {}: regret drops by {:.1} ± {:.1} ({:?}), t* {:?} -> {:?} ({:?})",
                s.from_value,
                s.to_value,
                s.regret_improvement,
                s.regret_improvement_se,
                s.regret_verdict,
                s.zero_violation_from,
                s.zero_violation_to,
                s.zero_violation_verdict
            );
        }
    }
    println!("all trends hold: {}", report.all_pass);
    println!("traces and summaries under {}", out.display());
    Ok(())
}
