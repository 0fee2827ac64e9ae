use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use fair_cmab::bounds::compute_bounds;
use fair_cmab::experiment::{compare_policies, run, ExperimentConfig, ExperimentSummary, RunOptions};
use fair_cmab::oracle::max_slack_value;
use fair_cmab::Error;

#[derive(Parser)]
#[command(version, about = "Fairness-constrained combinatorial bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate every sweep entry and write traces plus summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Exit with code 4 when any guarantee check fails.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Print the analytical constants for each sweep entry without simulating.
    Bounds {
        #[arg(long)]
        config: PathBuf,
    },
    /// Check monotonicity trends across one or more summaries.
    Compare {
        #[arg(long, num_args = 1.., required = true)]
        summaries: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<u8, Error> {
    match command {
        Command::Run {
            config,
            strict,
            out,
            threads,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let summary = run(
                &cfg,
                &RunOptions {
                    out_dir: out,
                    threads,
                    dry_run: false,
                },
            )?;
            for e in &summary.entries {
                println!(
                    "{:<28} regret {:>12.3} ± {:<9.3} t*(mean) {:>8} verdicts {:?}",
                    e.label,
                    e.final_regret_mean,
                    e.final_regret_stderr,
                    e.zero_violation_mean_service
                        .map_or_else(|| "none".to_string(), |t| t.to_string()),
                    e.verdicts
                );
            }
            Ok(if strict && summary.any_fail() { 4 } else { 0 })
        }
        Command::Bounds { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let instance = cfg.validate()?;
            let delta = max_slack_value(&instance)?;
            let reports = cfg
                .sweep
                .iter()
                .map(|p| compute_bounds(&instance, p, cfg.horizon, delta))
                .collect::<Result<Vec<_>, _>>()?;
            println!("{}", serde_json::to_string_pretty(&reports)?);
            Ok(0)
        }
        Command::Compare { summaries } => {
            let loaded = summaries
                .iter()
                .map(|p| ExperimentSummary::load(p))
                .collect::<Result<Vec<_>, _>>()?;
            let report = compare_policies(&loaded)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            Ok(0)
        }
    }
}
