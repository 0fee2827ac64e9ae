//! Benchmark oracle: the best stationary randomization over super arms that
//! meets every fairness target with slack `delta`, given the true means.

use serde::{Deserialize, Serialize};

use crate::environment::Instance;
use crate::error::{Error, Result};
use crate::feasible::FeasibleFamily;
use crate::simplex::{LinearProgram, LpError, Relation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    /// `q*(S)` in canonical member order.
    pub distribution: Vec<f64>,
    /// `sum_S q*(S) sum_n mu_n S_n`.
    pub optimal_reward: f64,
    /// `E[S*_n] = sum_S q*(S) S_n`.
    pub marginals: Vec<f64>,
    pub delta_used: f64,
}

impl OracleSolution {
    /// Expected per-round benchmark reward `sum_n mu_n E[S*_n]`.
    pub fn benchmark_reward(&self, means: &[f64]) -> f64 {
        self.marginals.iter().zip(means).map(|(m, mu)| m * mu).sum()
    }
}

fn lp_error(e: LpError) -> Error {
    match e {
        LpError::Infeasible {
            certificate,
            residual,
        } => Error::Infeasible {
            certificate,
            residual,
        },
        other => Error::Solver(other.to_string()),
    }
}

/// Solves the benchmark program
///
/// ```text
/// maximize   sum_S q(S) sum_n mu_n S_n
/// subject to lambda_n + delta <= sum_S q(S) S_n mu_n   for every arm n
///            sum_S q(S) = 1,  q >= 0
/// ```
pub fn solve_benchmark(instance: &Instance, delta: f64) -> Result<OracleSolution> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Argument(format!("delta = {delta} must be finite and >= 0")));
    }
    let family = instance.family();
    let means = instance.means();
    let rewards: Vec<f64> = family
        .members()
        .iter()
        .map(|s| instance.expected_reward(s))
        .collect();
    let mut lp = LinearProgram::new(rewards.clone());
    for (n, (&mu, &target)) in means.iter().zip(instance.targets()).enumerate() {
        let row = family
            .members()
            .iter()
            .map(|s| if s.contains(n) { mu } else { 0.0 })
            .collect();
        lp.add(row, Relation::Ge, target + delta);
    }
    lp.add(vec![1.0; family.len()], Relation::Eq, 1.0);
    let sol = lp.solve().map_err(lp_error)?;

    let distribution: Vec<f64> = sol.x.iter().map(|&q| if q < 1e-12 { 0.0 } else { q }).collect();
    let marginals = marginals(family, &distribution);
    let optimal_reward = distribution.iter().zip(&rewards).map(|(q, r)| q * r).sum();
    Ok(OracleSolution {
        distribution,
        optimal_reward,
        marginals,
        delta_used: delta,
    })
}

fn marginals(family: &FeasibleFamily, q: &[f64]) -> Vec<f64> {
    let mut m = vec![0.0; family.num_arms()];
    for (s, &qs) in family.members().iter().zip(q) {
        for &a in s.arms() {
            m[a] += qs;
        }
    }
    m
}

/// Largest `delta` for which the benchmark program is feasible.
///
/// Solved as one LP with `delta` shifted to `d = delta + max_n lambda_n >= 0`.
/// Returns [`Error::InfeasibleFairness`] carrying the value when it is not
/// strictly positive.
pub fn max_slack(instance: &Instance) -> Result<f64> {
    let delta = max_slack_value(instance)?;
    if delta > 0.0 {
        Ok(delta)
    } else {
        Err(Error::InfeasibleFairness { delta_max: delta })
    }
}

/// Like [`max_slack`] but returns the value whatever its sign.
pub fn max_slack_value(instance: &Instance) -> Result<f64> {
    let family = instance.family();
    let shift = instance.targets().iter().copied().fold(0.0, f64::max);
    let k = family.len();
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let mut lp = LinearProgram::new(objective);
    for (n, (&mu, &target)) in instance.means().iter().zip(instance.targets()).enumerate() {
        let mut row: Vec<f64> = family
            .members()
            .iter()
            .map(|s| if s.contains(n) { mu } else { 0.0 })
            .collect();
        row.push(-1.0);
        lp.add(row, Relation::Ge, target - shift);
    }
    let mut norm = vec![1.0; k + 1];
    norm[k] = 0.0;
    lp.add(norm, Relation::Eq, 1.0);
    let sol = lp.solve().map_err(lp_error)?;
    Ok(sol.x[k] - shift)
}

/// Member maximizing `sum_n weights[n] S_n`, smallest canonical index on
/// ties.
pub fn full_argmax(family: &FeasibleFamily, weights: &[f64]) -> usize {
    let mut best = 0;
    let mut best_w = f64::NEG_INFINITY;
    for (i, s) in family.members().iter().enumerate() {
        let w = s.weight(weights);
        if w > best_w {
            best = i;
            best_w = w;
        }
    }
    best
}

/// Closed-form benchmark for a singleton family: meet every target exactly
/// and put the leftover mass on the best arm.
pub fn singleton_closed_form(means: &[f64], targets: &[f64], delta: f64) -> Option<f64> {
    let load: f64 = means.iter().zip(targets).map(|(m, l)| (l + delta) / m).sum();
    if load > 1.0 {
        return None;
    }
    let mu_max = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let served: f64 = targets.iter().map(|l| l + delta).sum();
    Some(served + (1.0 - load) * mu_max)
}

/// Closed-form maximum slack for a singleton family:
/// the root of `sum_n (lambda_n + delta) / mu_n = 1`.
pub fn singleton_max_slack(means: &[f64], targets: &[f64]) -> f64 {
    let inv: f64 = means.iter().map(|m| 1.0 / m).sum();
    let load: f64 = means.iter().zip(targets).map(|(m, l)| l / m).sum();
    (1.0 - load) / inv
}
