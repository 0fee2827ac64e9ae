//! Runs the bundled ten-arm study and prints per-entry results plus the
//! trend checks over eta and M.
//!
//! cargo run --release --example synthetic_sweep -- [horizon] [replications] [out_dir]

use std::path::PathBuf;

use fair_cmab::experiment::{compare_policies, run, ExperimentConfig, RunOptions};

fn main() -> fair_cmab::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let mut cfg = ExperimentConfig::synthetic_default();
    if let Some(h) = args.first() {
        cfg.horizon = h.parse().expect("horizon must be an integer");
    }
    if let Some(r) = args.get(1) {
        cfg.replications = r.parse().expect("replications must be an integer");
    }
    let opts = RunOptions {
        out_dir: args.get(2).map(PathBuf::from),
        dry_run: args.get(2).is_none(),
        ..Default::default()
    };

    let start = std::time::Instant::now();
    let summary = run(&cfg, &opts)?;
    println!(
        "T = {}, {} replications, {:.1}s, delta_max = {:.6}",
        cfg.horizon,
        cfg.replications,
        start.elapsed().as_secs_f64(),
        summary.oracle.delta_max
    );
    for e in &summary.entries {
        let rates: Vec<String> = e.service_rate_mean.iter().map(|r| format!("{r:.4}")).collect();
        println!(
            "{:<20} regret {:>10.2} ± {:<7.2} bound {:>12.1}  t* {:>7}  t0 {:>12}",
            e.label,
            e.final_regret_mean,
            e.final_regret_stderr,
            e.bounds.regret_bound,
            e.zero_violation_mean_service.map_or("none".into(), |t| t.to_string()),
            e.bounds.t0.map_or("n/a".into(), |t| format!("{t:.4e}")),
        );
        println!("    service [{}]", rates.join(", "));
        println!("    {:?}", e.verdicts);
    }

    let report = compare_policies(std::slice::from_ref(&summary))?;
    for trend in &report.trends {
        println!("{:?} / {}", trend.parameter, trend.group);
        for s in &trend.steps {
            println!(
                "    {} -> {}: regret -{:.2} (se {:.2}, sig {}), t* shift {:.0} (se {:.0}, sig {})",
                s.from_value,
                s.to_value,
                s.regret_improvement,
                s.regret_improvement_se,
                s.regret_improvement_significant,
                s.zero_violation_shift,
                s.zero_violation_shift_se,
                s.zero_violation_shift_significant
            );
        }
    }
    Ok(())
}
