//! Experiment runner: config loading, replicated sweeps, CSV traces,
//! summaries and cross-entry comparisons.

pub mod compare;
pub mod config;
pub mod runner;
pub mod summary;

pub use compare::{compare_policies, OrderingReport, Parameter, Trend, TrendStep};
pub use config::{entry_label, Diagnostics, ExperimentConfig};
pub use runner::{run, simulate_entry, simulate_replication, write_trace_csv, RunOptions};
pub use summary::{EntrySummary, ExperimentSummary, Verdict, Verdicts};
