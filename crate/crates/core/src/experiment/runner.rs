//! Replicated simulation of sweep entries.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::bounds::compute_bounds;
use crate::environment::{keyed_rng, Instance, RewardStream};
use crate::error::{Error, Result};
use crate::experiment::config::{entry_label, Diagnostics, ExperimentConfig};
use crate::experiment::summary::{summarize_entry, ExperimentSummary, OracleSummary};
use crate::metrics::{
    add_mask, mean_service_violation_series, regret_increments, ucb_drift_violations, RunTrace,
};
use crate::oracle::{full_argmax, max_slack_value, solve_benchmark, OracleSolution};
use crate::policy::{lcfl_step_with, PolicyConfig, PolicyState, StepScratch, Variant};

const SAMPLER_DOMAIN: u64 = 0x7069_636b;

/// Simulates one replication for `horizon` rounds.
///
/// Reward draws depend only on `(master_seed, replication, arm, round)` and
/// random picks only on `(master_seed, replication)`, so every sweep entry
/// of a replication shares both streams.
pub fn simulate_replication(
    instance: &Instance,
    cfg: &PolicyConfig,
    horizon: u64,
    master_seed: u64,
    replication: u64,
    diagnostics: Diagnostics,
) -> Result<RunTrace> {
    let n = instance.num_arms();
    let family = instance.family();
    let mut state = PolicyState::new(n);
    let mut rewards = RewardStream::new(master_seed, replication, n);
    let mut sampler = keyed_rng(master_seed, replication, SAMPLER_DOMAIN);
    let mut scratch = StepScratch::default();

    let cap = horizon as usize;
    let mut trace = RunTrace {
        horizon,
        selections: Vec::with_capacity(cap),
        served: Vec::with_capacity(cap),
        comparisons_per_round: cfg.comparisons_per_round(family.len()),
        best_pick_rounds: diagnostics.shadow_argmax.then(Vec::new),
        queue_gaps: diagnostics.shadow_argmax.then(|| Vec::with_capacity(cap)),
        lemma2_violations: diagnostics.lemma2_assert.then(Vec::new),
        pulls: Vec::new(),
    };

    let mut weights = vec![0.0; n];
    let mut queues_before = vec![0.0; n];
    let mut ucb_before = vec![0.0; n];
    let mut pulls_before = vec![0u64; n];

    for t in 0..horizon {
        let mut shadow = None;
        if diagnostics.shadow_argmax {
            state.fill_arm_weights(cfg, &mut weights);
            let best = full_argmax(family, &weights);
            let queue_best = full_argmax(family, &state.queues);
            queues_before.copy_from_slice(&state.queues);
            shadow = Some((best, queue_best));
        }
        if diagnostics.lemma2_assert {
            ucb_before.copy_from_slice(&state.ucb);
            pulls_before.copy_from_slice(&state.pulls);
        }

        let out = lcfl_step_with(&mut state, instance, cfg, &mut rewards, &mut sampler, &mut scratch)?;
        let selected = &family.members()[out.selected];
        let mask = out
            .draws
            .iter()
            .filter(|d| d.value == 1)
            .fold(0u64, |m, d| m | (1 << d.arm));
        trace.selections.push(out.selected as u32);
        trace.served.push(mask);

        if let Some((best, queue_best)) = shadow {
            let picked = cfg.variant == Variant::PessimisticOptimistic
                || scratch.sampled().contains(&best);
            if picked {
                trace.best_pick_rounds.as_mut().expect("enabled").push(t);
            }
            let gap = family.members()[queue_best].weight(&queues_before)
                - selected.weight(&queues_before);
            trace.queue_gaps.as_mut().expect("enabled").push(gap);
        }
        if diagnostics.lemma2_assert {
            let pulled = selected.membership();
            for arm in ucb_drift_violations(&ucb_before, &pulls_before, pulled, &state.ucb, horizon) {
                trace.lemma2_violations.as_mut().expect("enabled").push((t + 1, arm));
            }
        }
    }
    trace.pulls = state.pulls;
    Ok(trace)
}

/// All replications of one sweep entry, in replication order.
pub fn simulate_entry(
    instance: &Instance,
    cfg: &PolicyConfig,
    horizon: u64,
    replications: u64,
    master_seed: u64,
    diagnostics: Diagnostics,
) -> Result<Vec<RunTrace>> {
    (0..replications)
        .into_par_iter()
        .map(|r| simulate_replication(instance, cfg, horizon, master_seed, r, diagnostics))
        .collect()
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides `output_dir` from the config.
    pub out_dir: Option<PathBuf>,
    /// Worker threads; `None` uses rayon's default pool.
    pub threads: Option<usize>,
    /// Skip writing CSV traces and the summary file.
    pub dry_run: bool,
}

/// Runs every sweep entry, writes per-replication CSV traces and
/// `summary.json`, and returns the summary.
pub fn run(config: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentSummary> {
    match opts.threads {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(|| run_inner(config, opts)),
        None => run_inner(config, opts),
    }
}

fn run_inner(config: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentSummary> {
    let instance = config.validate()?;
    let oracle = solve_benchmark(&instance, config.benchmark_delta)?;
    let delta_max = max_slack_value(&instance)?;
    let out_dir = opts.out_dir.clone().unwrap_or_else(|| config.output_dir.clone());
    if !opts.dry_run {
        fs::create_dir_all(&out_dir)?;
    }

    let mut entries = Vec::with_capacity(config.sweep.len());
    for (i, cfg) in config.sweep.iter().enumerate() {
        let label = entry_label(i, cfg);
        let bounds = compute_bounds(&instance, cfg, config.horizon, delta_max)?;
        let traces = simulate_entry(
            &instance,
            cfg,
            config.horizon,
            config.replications,
            config.master_seed,
            config.diagnostics,
        )?;
        let mean_violation = mean_service_violation_series(&traces, instance.targets());
        if !opts.dry_run {
            let dir = out_dir.join(&label);
            fs::create_dir_all(&dir)?;
            traces
                .par_iter()
                .enumerate()
                .try_for_each(|(r, tr)| {
                    write_trace_csv(
                        &dir.join(format!("rep_{r:03}.csv")),
                        tr,
                        &instance,
                        &oracle,
                        &mean_violation,
                        config.subsample,
                    )
                })?;
        }
        entries.push(summarize_entry(
            label,
            *cfg,
            &instance,
            &oracle,
            &traces,
            &mean_violation,
            bounds,
        ));
    }

    let summary = ExperimentSummary {
        instance: config.instance.clone(),
        horizon: config.horizon,
        replications: config.replications,
        master_seed: config.master_seed,
        oracle: OracleSummary {
            benchmark_delta: config.benchmark_delta,
            optimal_reward: oracle.optimal_reward,
            marginals: oracle.marginals.clone(),
            distribution: oracle.distribution.clone(),
            delta_max,
        },
        entries,
    };
    if !opts.dry_run {
        write_atomic(&out_dir.join("summary.json"), summary.to_json()?.as_bytes())?;
    }
    Ok(summary)
}

/// Rounds at which a trace row is written: every `stride` rounds plus the
/// final round.
pub fn row_rounds(horizon: u64, stride: u64) -> Vec<u64> {
    let mut rows: Vec<u64> = (1..=horizon / stride).map(|k| k * stride).collect();
    if rows.last() != Some(&horizon) {
        rows.push(horizon);
    }
    rows
}

pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes the subsampled trace of one replication.
pub fn write_trace_csv(
    path: &Path,
    trace: &RunTrace,
    instance: &Instance,
    oracle: &OracleSolution,
    mean_violation: &[f64],
    stride: u64,
) -> Result<()> {
    let n = instance.num_arms();
    let increments = regret_increments(instance.family(), oracle, instance.means());
    let targets = instance.targets();

    let mut buf = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let mut header = vec![
            "round".to_string(),
            "cumulative_regret".into(),
            "cumulative_violation_realized".into(),
            "cumulative_violation_mean_applicable".into(),
        ];
        header.extend((1..=n).map(|a| format!("per_arm_avg_reward_{a}")));
        header.push("comparisons".into());
        w.write_record(&header)?;

        let mut counts = vec![0u64; n];
        let mut regret = 0.0;
        let rows = row_rounds(trace.horizon, stride);
        let mut next = rows.iter().peekable();
        for (t, (&sel, &mask)) in trace.selections.iter().zip(&trace.served).enumerate() {
            regret += increments[sel as usize];
            add_mask(&mut counts, mask);
            let done = t as u64 + 1;
            if next.peek() == Some(&&done) {
                next.next();
                let realized: f64 = targets
                    .iter()
                    .zip(&counts)
                    .map(|(l, &c)| (l * done as f64 - c as f64).max(0.0))
                    .sum();
                let mut rec = vec![
                    done.to_string(),
                    fmt_float(regret),
                    fmt_float(realized),
                    fmt_float(mean_violation[done as usize]),
                ];
                rec.extend(counts.iter().map(|&c| fmt_float(c as f64 / done as f64)));
                rec.push(trace.comparisons(done).to_string());
                w.write_record(&rec)?;
            }
        }
        w.flush()?;
    }
    write_atomic(path, &buf)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_include_final_round() {
        assert_eq!(row_rounds(1, 100), vec![1]);
        assert_eq!(row_rounds(250, 100), vec![100, 200, 250]);
        assert_eq!(row_rounds(200, 100), vec![100, 200]);
    }

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(0.0), "0.0000000000000000e0");
    }
}
