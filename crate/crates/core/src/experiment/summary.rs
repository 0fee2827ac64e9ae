use serde::{Deserialize, Serialize};

use crate::bounds::{max_gap_bound, BoundReport};
use crate::environment::{Instance, InstanceSpec};
use crate::error::Result;
use crate::metrics::{
    best_pick_gaps, lemma3_gap_frequency, pseudo_regret, violation_series, zero_violation_point,
    RunTrace,
};
use crate::oracle::OracleSolution;
use crate::policy::PolicyConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    NotInForce,
}

impl Verdict {
    fn check(in_force: bool, ok: bool) -> Self {
        match (in_force, ok) {
            (false, _) => Verdict::NotInForce,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdicts {
    pub regret_bound: Verdict,
    pub zero_violation: Verdict,
    pub lemma1_best_picks: Verdict,
    pub lemma2_ucb_drift: Verdict,
    pub lemma3_queue_gap: Verdict,
}

impl Verdicts {
    pub fn any_fail(&self) -> bool {
        [
            self.regret_bound,
            self.zero_violation,
            self.lemma1_best_picks,
            self.lemma2_ucb_drift,
            self.lemma3_queue_gap,
        ]
        .contains(&Verdict::Fail)
    }
}

/// Best-pick statistics pooled over replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestPickSummary {
    pub alpha: f64,
    pub inclusion_rate: f64,
    /// `3 sqrt(alpha (1 - alpha) / T)`.
    pub inclusion_tolerance: f64,
    pub gap_count: u64,
    pub gap_mean: f64,
    pub gap_mean_se: f64,
    pub gap_second_moment: f64,
    pub gap_second_moment_se: f64,
    pub gap_max: u64,
    pub gap_max_allowance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryDiagnostics {
    pub best_picks: Option<BestPickSummary>,
    pub lemma2_violations: Option<u64>,
    pub lemma3_frequency: Option<f64>,
    pub lemma3_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntrySummary {
    pub label: String,
    pub config: PolicyConfig,
    pub final_regret_mean: f64,
    pub final_regret_stderr: f64,
    pub final_regrets: Vec<f64>,
    /// Zero-violation point of the mean-service violation curve.
    pub zero_violation_mean_service: Option<u64>,
    pub final_violation_mean_service: f64,
    /// Per-replication zero-violation points of realized service.
    pub zero_violation_realized: Vec<Option<u64>>,
    /// Mean over replications that reached zero violation.
    pub zero_violation_realized_mean: Option<f64>,
    /// Mean per-arm service rate at the horizon.
    pub service_rate_mean: Vec<f64>,
    pub comparisons_per_replication: u64,
    pub bounds: BoundReport,
    pub diagnostics: EntryDiagnostics,
    pub verdicts: Verdicts,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub benchmark_delta: f64,
    pub optimal_reward: f64,
    pub marginals: Vec<f64>,
    pub distribution: Vec<f64>,
    pub delta_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub instance: InstanceSpec,
    pub horizon: u64,
    pub replications: u64,
    pub master_seed: u64,
    pub oracle: OracleSummary,
    pub entries: Vec<EntrySummary>,
}

impl ExperimentSummary {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn any_fail(&self) -> bool {
        self.entries.iter().any(|e| e.verdicts.any_fail())
    }
}

pub(crate) fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn best_pick_summary(traces: &[RunTrace], alpha: f64, horizon: u64) -> Option<BestPickSummary> {
    let mut picks = 0u64;
    let mut gaps: Vec<f64> = Vec::new();
    let mut gap_max = 0;
    for tr in traces {
        let rounds = tr.best_pick_rounds.as_ref()?;
        picks += rounds.len() as u64;
        let g = best_pick_gaps(rounds, horizon);
        gap_max = gap_max.max(g.iter().copied().max().unwrap_or(0));
        gaps.extend(g.into_iter().map(|x| x as f64));
    }
    let (gap_mean, gap_mean_se) = mean_stderr(&gaps);
    let second: Vec<f64> = gaps.iter().map(|g| (g - 1.0).powi(2)).collect();
    let (gap_second_moment, gap_second_moment_se) = mean_stderr(&second);
    Some(BestPickSummary {
        alpha,
        inclusion_rate: picks as f64 / (horizon * traces.len() as u64) as f64,
        inclusion_tolerance: 3.0 * (alpha * (1.0 - alpha) / horizon as f64).sqrt(),
        gap_count: gaps.len() as u64,
        gap_mean,
        gap_mean_se,
        gap_second_moment,
        gap_second_moment_se,
        gap_max,
        gap_max_allowance: 5.0 * max_gap_bound(alpha, horizon),
    })
}

impl BestPickSummary {
    /// Inclusion rate, both gap moments and the maximum gap within their
    /// Monte Carlo allowances.
    pub fn within_bounds(&self) -> bool {
        let c1 = crate::bounds::c1(self.alpha);
        (self.inclusion_rate - self.alpha).abs() <= self.inclusion_tolerance
            && self.gap_mean <= 1.0 / self.alpha + 3.0 * self.gap_mean_se
            && self.gap_second_moment <= c1 + 3.0 * self.gap_second_moment_se
            && self.gap_max as f64 <= self.gap_max_allowance
    }
}

pub(crate) fn summarize_entry(
    label: String,
    config: PolicyConfig,
    instance: &Instance,
    oracle: &OracleSolution,
    traces: &[RunTrace],
    mean_violation: &[f64],
    bounds: BoundReport,
) -> EntrySummary {
    let horizon = bounds.horizon;
    let n = instance.num_arms();
    let final_regrets: Vec<f64> = traces
        .iter()
        .map(|tr| pseudo_regret(tr, instance.family(), oracle, instance.means(), horizon))
        .collect();
    let (final_regret_mean, final_regret_stderr) = mean_stderr(&final_regrets);

    let zero_violation_realized: Vec<Option<u64>> = traces
        .iter()
        .map(|tr| zero_violation_point(&violation_series(tr, instance.targets())))
        .collect();
    let reached: Vec<f64> = zero_violation_realized.iter().flatten().map(|&t| t as f64).collect();
    let zero_violation_realized_mean =
        (!reached.is_empty()).then(|| reached.iter().sum::<f64>() / reached.len() as f64);
    let zero_violation_mean_service = zero_violation_point(mean_violation);

    let mut service_rate_mean = vec![0.0; n];
    for tr in traces {
        for (acc, c) in service_rate_mean.iter_mut().zip(tr.service(n, horizon)) {
            *acc += c as f64 / horizon as f64;
        }
    }
    for v in &mut service_rate_mean {
        *v /= traces.len() as f64;
    }

    let best_picks = best_pick_summary(traces, bounds.alpha, horizon);
    let lemma2_violations = traces
        .iter()
        .map(|t| t.lemma2_violations.as_ref().map(|v| v.len() as u64))
        .sum::<Option<u64>>();
    let lemma3_threshold = bounds.gamma.map(|g| {
        g - 3.0 * (g * (1.0 - g) / horizon as f64).sqrt()
    });
    let lemma3_frequency = traces
        .iter()
        .map(|t| lemma3_gap_frequency(t, bounds.b1).ok())
        .sum::<Option<f64>>()
        .map(|s| s / traces.len() as f64);

    let zero_ok = match (zero_violation_mean_service, bounds.t0) {
        (Some(t), Some(t0)) => t as f64 <= t0,
        // Still violating at the horizon is consistent with t0 beyond it.
        (None, Some(t0)) => t0 >= horizon as f64,
        (_, None) => false,
    };
    let verdicts = Verdicts {
        regret_bound: Verdict::check(
            bounds.regret_guarantee_in_force,
            final_regret_mean <= bounds.regret_bound,
        ),
        zero_violation: Verdict::check(bounds.violation_guarantee_in_force, zero_ok),
        lemma1_best_picks: match &best_picks {
            Some(b) => Verdict::check(true, b.within_bounds()),
            None => Verdict::NotInForce,
        },
        lemma2_ucb_drift: match lemma2_violations {
            Some(v) => Verdict::check(true, v == 0),
            None => Verdict::NotInForce,
        },
        lemma3_queue_gap: match (lemma3_frequency, lemma3_threshold) {
            (Some(f), Some(th)) => Verdict::check(true, f >= th),
            _ => Verdict::NotInForce,
        },
    };

    EntrySummary {
        label,
        config,
        final_regret_mean,
        final_regret_stderr,
        final_regrets,
        zero_violation_mean_service,
        final_violation_mean_service: mean_violation.last().copied().unwrap_or(0.0),
        zero_violation_realized,
        zero_violation_realized_mean,
        service_rate_mean,
        comparisons_per_replication: traces.first().map_or(0, |t| t.comparisons(horizon)),
        bounds,
        diagnostics: EntryDiagnostics {
            best_picks,
            lemma2_violations,
            lemma3_frequency,
            lemma3_threshold,
        },
        verdicts,
    }
}
