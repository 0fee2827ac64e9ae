//! Empirical metrics over simulated runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasible::FeasibleFamily;
use crate::oracle::OracleSolution;

/// Everything recorded for one replication.
///
/// Service is stored per round as a bit mask: bit `n` of `served[t]` is set
/// when arm `n` was pulled in round `t` and paid 1.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub horizon: u64,
    pub selections: Vec<u32>,
    pub served: Vec<u64>,
    pub comparisons_per_round: u64,
    /// Rounds whose random picks contained the full-family argmax
    /// (shadow diagnostics only).
    pub best_pick_rounds: Option<Vec<u64>>,
    /// Per-round `sum_n Q_n S‡_n - sum_n Q_n Ŝ_n` (shadow diagnostics only).
    pub queue_gaps: Option<Vec<f64>>,
    /// Rounds at which a UCB drift inequality failed (when checked).
    pub lemma2_violations: Option<Vec<(u64, usize)>>,
    /// Final per-arm pull counts.
    pub pulls: Vec<u64>,
}

impl RunTrace {
    pub fn comparisons(&self, upto: u64) -> u64 {
        self.comparisons_per_round * upto
    }

    /// Cumulative `sum_{tau < t} Ŝ_n X_n` per arm.
    pub fn service(&self, num_arms: usize, upto: u64) -> Vec<u64> {
        let mut s = vec![0u64; num_arms];
        for &mask in &self.served[..upto as usize] {
            add_mask(&mut s, mask);
        }
        s
    }
}

#[inline]
pub(crate) fn add_mask(counts: &mut [u64], mut mask: u64) {
    while mask != 0 {
        let n = mask.trailing_zeros() as usize;
        counts[n] += 1;
        mask &= mask - 1;
    }
}

/// `sum_n (lambda_n t - service_n)^+` for one cumulative service vector
/// (which may be a cross-replication mean).
pub fn violation_from_service(targets: &[f64], service: &[f64], t: u64) -> f64 {
    targets
        .iter()
        .zip(service)
        .map(|(l, s)| (l * t as f64 - s).max(0.0))
        .sum()
}

/// Realized cumulative fairness violation of one trace after `upto` rounds.
pub fn cumulative_violation(trace: &RunTrace, targets: &[f64], upto: u64) -> f64 {
    let s: Vec<f64> = trace
        .service(targets.len(), upto)
        .into_iter()
        .map(|c| c as f64)
        .collect();
    violation_from_service(targets, &s, upto)
}

/// Violation after `upto` rounds evaluated on the mean service across
/// replications.
pub fn mean_service_violation(traces: &[RunTrace], targets: &[f64], upto: u64) -> f64 {
    mean_service_violation_series(traces, targets)[upto as usize]
}

/// Realized violation at every `t = 0..=T`.
pub fn violation_series(trace: &RunTrace, targets: &[f64]) -> Vec<f64> {
    let mut counts = vec![0u64; targets.len()];
    let mut out = Vec::with_capacity(trace.served.len() + 1);
    out.push(0.0);
    for (t, &mask) in trace.served.iter().enumerate() {
        add_mask(&mut counts, mask);
        out.push(debt(targets, &counts, 1.0, t as u64 + 1));
    }
    out
}

/// Mean-service violation at every `t = 0..=T`.
pub fn mean_service_violation_series(traces: &[RunTrace], targets: &[f64]) -> Vec<f64> {
    let Some(first) = traces.first() else {
        return vec![0.0];
    };
    let horizon = first.served.len();
    let reps = traces.len() as f64;
    let mut counts = vec![0u64; targets.len()];
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(0.0);
    for t in 0..horizon {
        for tr in traces {
            add_mask(&mut counts, tr.served[t]);
        }
        out.push(debt(targets, &counts, reps, t as u64 + 1));
    }
    out
}

#[inline]
fn debt(targets: &[f64], counts: &[u64], reps: f64, t: u64) -> f64 {
    targets
        .iter()
        .zip(counts)
        .map(|(l, &c)| (l * t as f64 - c as f64 / reps).max(0.0))
        .sum()
}

/// Smallest `t*` with zero violation on all of `[t*, T]`; `None` when the
/// violation is still positive at `T`.
pub fn zero_violation_point(series: &[f64]) -> Option<u64> {
    match series.iter().rposition(|&v| v > 0.0) {
        None => Some(0),
        Some(last) if last + 1 == series.len() => None,
        Some(last) => Some(last as u64 + 1),
    }
}

/// Per-round pseudo-regret increment `sum_n mu_n E[S*_n] - sum_{n in S} mu_n`
/// for every member of the family.
pub fn regret_increments(family: &FeasibleFamily, oracle: &OracleSolution, means: &[f64]) -> Vec<f64> {
    let best = oracle.benchmark_reward(means);
    family.members().iter().map(|s| best - s.weight(means)).collect()
}

/// `sum_{tau < t} sum_n mu_n (E[S*_n] - Ŝ_n(tau))`.
pub fn pseudo_regret(
    trace: &RunTrace,
    family: &FeasibleFamily,
    oracle: &OracleSolution,
    means: &[f64],
    upto: u64,
) -> f64 {
    let inc = regret_increments(family, oracle, means);
    trace.selections[..upto as usize]
        .iter()
        .map(|&s| inc[s as usize])
        .sum()
}

/// Gap statistics between consecutive best picks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestPickStats {
    pub horizon: u64,
    pub best_picks: u64,
    pub inclusion_rate: f64,
    pub gap_count: u64,
    pub gap_mean: f64,
    pub gap_mean_se: f64,
    /// Sample mean of `(gap - 1)^2`.
    pub gap_second_moment: f64,
    pub gap_second_moment_se: f64,
    pub gap_max: u64,
}

/// Gaps `min(T, t_{k+1}) - t_k` between best-pick rounds, with `t_0 = 0`.
pub fn best_pick_gaps(rounds: &[u64], horizon: u64) -> Vec<u64> {
    let mut points: Vec<u64> = Vec::with_capacity(rounds.len() + 2);
    if rounds.first() != Some(&0) {
        points.push(0);
    }
    points.extend(rounds.iter().copied().filter(|&t| t < horizon));
    points.push(horizon);
    points.windows(2).map(|w| w[1] - w[0]).filter(|&g| g > 0).collect()
}

fn mean_and_se(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64, usize) {
    let n = xs.clone().count();
    if n == 0 {
        return (0.0, 0.0, 0);
    }
    let mean = xs.clone().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0, n);
    }
    let var = xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt(), n)
}

pub fn best_pick_statistics(trace: &RunTrace) -> Result<BestPickStats> {
    let rounds = trace.best_pick_rounds.as_ref().ok_or_else(|| {
        Error::DiagnosticUnavailable("best-pick rounds need shadow_argmax enabled".into())
    })?;
    let gaps = best_pick_gaps(rounds, trace.horizon);
    let (gap_mean, gap_mean_se, count) = mean_and_se(gaps.iter().map(|&g| g as f64));
    let (gap_second_moment, gap_second_moment_se, _) =
        mean_and_se(gaps.iter().map(|&g| (g as f64 - 1.0).powi(2)));
    Ok(BestPickStats {
        horizon: trace.horizon,
        best_picks: rounds.len() as u64,
        inclusion_rate: rounds.len() as f64 / trace.horizon.max(1) as f64,
        gap_count: count as u64,
        gap_mean,
        gap_mean_se,
        gap_second_moment,
        gap_second_moment_se,
        gap_max: gaps.iter().copied().max().unwrap_or(0),
    })
}

/// Fraction of rounds whose queue-weight gap to the queue-only argmax is at
/// most `b1`.
pub fn lemma3_gap_frequency(trace: &RunTrace, b1: f64) -> Result<f64> {
    let gaps = trace.queue_gaps.as_ref().ok_or_else(|| {
        Error::DiagnosticUnavailable("queue gaps need shadow_argmax enabled".into())
    })?;
    if gaps.is_empty() {
        return Ok(1.0);
    }
    Ok(gaps.iter().filter(|&&g| g <= b1).count() as f64 / gaps.len() as f64)
}

/// Checks the per-step UCB drift inequalities between two consecutive
/// rounds. Returns the arms that violate them.
///
/// `prev_ucb` and `prev_pulls` are `w(t-1)` and `H(t-1)`, `pulled` marks
/// `Ŝ(t-1)`, and `ucb` is `w(t)`.
pub fn ucb_drift_violations(
    prev_ucb: &[f64],
    prev_pulls: &[u64],
    pulled: &[bool],
    ucb: &[f64],
    horizon: u64,
) -> Vec<usize> {
    const TOL: f64 = 1e-12;
    let log_horizon = (horizon as f64).ln().max(0.0);
    (0..ucb.len())
        .filter(|&n| {
            let diff = ucb[n] - prev_ucb[n];
            let h = prev_pulls[n];
            if h >= 1 {
                let h = h as f64;
                let bound = -1.0 / h - (3.0 * log_horizon / (2.0 * h)).sqrt();
                diff < bound - TOL
            } else if pulled[n] {
                diff < -1.0 - TOL
            } else {
                diff != 0.0
            }
        })
        .collect()
}
