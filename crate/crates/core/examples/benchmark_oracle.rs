//! Solves the fairness-constrained benchmark for the ten-arm study and for
//! an overloaded variant that admits no feasible randomization.
//!
//! cargo run --example benchmark_oracle

use fair_cmab::experiment::ExperimentConfig;
use fair_cmab::oracle::{max_slack, singleton_closed_form};
use fair_cmab::{solve_benchmark, Error, Instance};

fn main() -> fair_cmab::Result<()> {
    let cfg = ExperimentConfig::synthetic_default();
    let instance = cfg.validate()?;
    let delta_max = max_slack(&instance)?;
    println!("maximum slack delta_max = {delta_max:.6}");

    for delta in [0.0, delta_max / 2.0, delta_max] {
        let sol = solve_benchmark(&instance, delta)?;
        let closed = singleton_closed_form(instance.means(), instance.targets(), delta);
        println!("delta = {delta:.5}: reward {:.9} (closed form {closed:.9?})", sol.optimal_reward);
        let q: Vec<String> = sol.distribution.iter().map(|q| format!("{q:.4}")).collect();
        println!("    q* = [{}]", q.join(", "));
    }

    let doubled: Vec<f64> = instance.targets().iter().map(|l| 3.0 * l).collect();
    let overloaded = Instance::new(instance.means().to_vec(), doubled, instance.family().clone())?;
    match solve_benchmark(&overloaded, 0.0) {
        Err(Error::Infeasible { certificate, residual }) => {
            println!("tripled targets are infeasible (phase-one residual {residual:.3e})");
            let z: Vec<String> = certificate.iter().map(|z| format!("{z:.3}")).collect();
            println!("    certificate z = [{}]", z.join(", "));
        }
        other => println!("unexpected: {other:?}"),
    }
    if let Err(e) = max_slack(&overloaded) {
        println!("    {e}");
    }
    Ok(())
}
