//! Monotonicity checks across sweep entries run on common random numbers.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::experiment::summary::{mean_stderr, EntrySummary, ExperimentSummary, Verdict};
use crate::policy::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    M,
    Eta,
}

/// Paired comparison of two consecutive entries along a sweep parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendStep {
    pub from_label: String,
    pub to_label: String,
    pub from_value: f64,
    pub to_value: f64,
    /// Mean over replications of `regret(from) - regret(to)`.
    pub regret_improvement: f64,
    pub regret_improvement_se: f64,
    /// One-sided paired t-test at 95%.
    pub regret_improvement_significant: bool,
    pub regret_verdict: Verdict,
    pub zero_violation_from: Option<u64>,
    pub zero_violation_to: Option<u64>,
    /// Mean over replications of the expected-direction difference in
    /// realized zero-violation points (censored at the horizon).
    pub zero_violation_shift: f64,
    pub zero_violation_shift_se: f64,
    pub zero_violation_shift_significant: bool,
    pub zero_violation_verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trend {
    pub parameter: Parameter,
    pub group: String,
    pub steps: Vec<TrendStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    pub trends: Vec<Trend>,
    pub all_pass: bool,
}

impl OrderingReport {
    pub fn trend(&self, parameter: Parameter, group: &str) -> Option<&Trend> {
        self.trends
            .iter()
            .find(|t| t.parameter == parameter && t.group == group)
    }
}

/// One-sided 95% paired test that the mean of `diffs` is positive.
pub fn paired_positive(diffs: &[f64]) -> (f64, f64, bool) {
    let (mean, se) = mean_stderr(diffs);
    let significant = if diffs.len() < 2 || se == 0.0 {
        mean > 0.0
    } else {
        let t = StudentsT::new(0.0, 1.0, (diffs.len() - 1) as f64).expect("valid dof");
        mean / se > t.inverse_cdf(0.95)
    };
    (mean, se, significant)
}

fn tstar_key(t: Option<u64>) -> u64 {
    t.unwrap_or(u64::MAX)
}

fn step(
    from: &EntrySummary,
    to: &EntrySummary,
    parameter: Parameter,
    horizon: u64,
) -> Result<TrendStep> {
    if from.final_regrets.len() != to.final_regrets.len() {
        return Err(Error::Argument(format!(
            "{} and {} have different replication counts",
            from.label, to.label
        )));
    }
    let value = |e: &EntrySummary| match parameter {
        Parameter::M => e.config.m_picks as f64,
        Parameter::Eta => e.config.eta,
    };
    let regret_diffs: Vec<f64> = from
        .final_regrets
        .iter()
        .zip(&to.final_regrets)
        .map(|(a, b)| a - b)
        .collect();
    let (ri, ri_se, ri_sig) = paired_positive(&regret_diffs);

    // Larger M -> earlier zero violation; larger eta -> later.
    let censor = |t: Option<u64>| t.unwrap_or(horizon) as f64;
    let t_diffs: Vec<f64> = from
        .zero_violation_realized
        .iter()
        .zip(&to.zero_violation_realized)
        .map(|(&a, &b)| match parameter {
            Parameter::M => censor(a) - censor(b),
            Parameter::Eta => censor(b) - censor(a),
        })
        .collect();
    let (ts, ts_se, ts_sig) = paired_positive(&t_diffs);
    let (tf, tt) = (from.zero_violation_mean_service, to.zero_violation_mean_service);
    let t_ok = match parameter {
        Parameter::M => tstar_key(tf) >= tstar_key(tt),
        Parameter::Eta => tstar_key(tf) <= tstar_key(tt),
    };

    Ok(TrendStep {
        from_label: from.label.clone(),
        to_label: to.label.clone(),
        from_value: value(from),
        to_value: value(to),
        regret_improvement: ri,
        regret_improvement_se: ri_se,
        regret_improvement_significant: ri_sig,
        regret_verdict: if ri >= 0.0 { Verdict::Pass } else { Verdict::Fail },
        zero_violation_from: tf,
        zero_violation_to: tt,
        zero_violation_shift: ts,
        zero_violation_shift_se: ts_se,
        zero_violation_shift_significant: ts_sig,
        zero_violation_verdict: if t_ok { Verdict::Pass } else { Verdict::Fail },
    })
}

/// Groups entries that differ in a single parameter and checks that regret
/// is nonincreasing in `M` and in `eta`, the zero-violation point is
/// nonincreasing in `M` and nondecreasing in `eta`.
pub fn compare_policies(summaries: &[ExperimentSummary]) -> Result<OrderingReport> {
    let Some(first) = summaries.first() else {
        return Err(Error::Argument("no summaries to compare".into()));
    };
    for s in &summaries[1..] {
        if s.instance != first.instance
            || s.horizon != first.horizon
            || s.master_seed != first.master_seed
            || s.replications != first.replications
        {
            return Err(Error::Argument(
                "summaries differ in instance, horizon, seed or replication count".into(),
            ));
        }
    }
    let entries: Vec<&EntrySummary> = summaries.iter().flat_map(|s| &s.entries).collect();
    if entries.len() < 2 {
        return Err(Error::Argument("need at least two entries to compare".into()));
    }

    let mut trends = Vec::new();
    for parameter in [Parameter::M, Parameter::Eta] {
        let mut groups: Vec<(String, Vec<&EntrySummary>)> = Vec::new();
        for e in &entries {
            let c = e.config;
            let eligible = match parameter {
                Parameter::M => c.variant != Variant::PessimisticOptimistic,
                Parameter::Eta => matches!(c.variant, Variant::Lcfl | Variant::PessimisticOptimistic),
            };
            if !eligible {
                continue;
            }
            let key = match parameter {
                Parameter::M => format!("{} eta={} epsilon={}", c.variant.label(), c.eta, c.epsilon),
                Parameter::Eta => {
                    format!("{} m={} epsilon={}", c.variant.label(), c.m_picks, c.epsilon)
                }
            };
            match groups.iter_mut().find(|(k, _)| *k == key) {
                Some((_, g)) => g.push(e),
                None => groups.push((key, vec![e])),
            }
        }
        for (group, mut members) in groups {
            if members.len() < 2 {
                continue;
            }
            match parameter {
                Parameter::M => members.sort_by_key(|e| e.config.m_picks),
                Parameter::Eta => members.sort_by(|a, b| a.config.eta.total_cmp(&b.config.eta)),
            }
            // The same configuration may appear in both sweeps.
            members.dedup_by(|a, b| a.config == b.config);
            if members.len() < 2 {
                continue;
            }
            let steps = members
                .windows(2)
                .map(|w| step(w[0], w[1], parameter, first.horizon))
                .collect::<Result<Vec<_>>>()?;
            trends.push(Trend {
                parameter,
                group,
                steps,
            });
        }
    }
    let all_pass = trends.iter().flat_map(|t| &t.steps).all(|s| {
        s.regret_verdict == Verdict::Pass && s.zero_violation_verdict == Verdict::Pass
    });
    Ok(OrderingReport { trends, all_pass })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paired_test_basics() {
        let (m, _, sig) = paired_positive(&[1.0, 1.1, 0.9, 1.0]);
        assert!((m - 1.0).abs() < 1e-12);
        assert!(sig);
        let (_, _, sig) = paired_positive(&[1.0, -1.0, 0.5, -0.5]);
        assert!(!sig);
        let (m, se, sig) = paired_positive(&[0.0; 5]);
        assert_eq!((m, se, sig), (0.0, 0.0, false));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(compare_policies(&[]).is_err());
    }
}
