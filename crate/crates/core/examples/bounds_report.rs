//! Tabulates the analytical constants of the ten-arm study across the
//! number of picks M and the trade-off weight eta.
//!
//! cargo run --example bounds_report [horizon]

use fair_cmab::experiment::ExperimentConfig;
use fair_cmab::oracle::max_slack;
use fair_cmab::{compute_bounds, PolicyConfig};

fn main() -> fair_cmab::Result<()> {
    let horizon = std::env::args()
        .nth(1)
        .map_or(200_000, |h| h.parse().expect("horizon must be an integer"));
    let instance = ExperimentConfig::synthetic_default().validate()?;
    let delta = max_slack(&instance)?;
    println!("T = {horizon}, delta_max = {delta:.6}");
    println!(
        "{:>3} {:>6} {:>7} {:>8} {:>8} {:>4} {:>8} {:>10} {:>14} {:>12}",
        "M", "eta", "alpha", "C1", "C3", "D", "gamma", "margin", "regret bound", "t0"
    );
    for m in 1..=10 {
        for eta in [1.0, 100.0] {
            let r = compute_bounds(&instance, &PolicyConfig::lcfl(eta, 1e-5, m), horizon, delta)?;
            println!(
                "{:>3} {:>6} {:>7.3} {:>8.3} {:>8.3} {:>4} {:>8.5} {:>10.6} {:>14.1} {:>12}",
                m,
                eta,
                r.alpha,
                r.c1,
                r.c3,
                r.d_rounds.map_or("-".into(), |d| d.to_string()),
                r.gamma.unwrap_or(f64::NAN),
                r.drift_margin.unwrap_or(f64::NAN),
                r.regret_bound,
                r.t0.map_or("n/a".into(), |t| format!("{t:.3e}"))
            );
        }
    }
    Ok(())
}
