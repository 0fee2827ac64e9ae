//! Analytical constants behind the regret and zero-violation guarantees.
//!
//! All logarithms are natural. Quantities that need the zero-violation
//! precondition `gamma * delta + gamma - 1 > 0` are `None` when it fails.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::environment::Instance;
use crate::error::{Error, Result};
use crate::policy::{PolicyConfig, Variant};

/// Serializes non-finite floats as the strings `"inf"`, `"-inf"`, `"nan"`.
pub mod extended_f64 {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => match s.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("unexpected float string {other:?}"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub num_arms: usize,
    pub family_size: usize,
    pub s_max: usize,
    pub horizon: u64,
    #[serde(with = "extended_f64")]
    pub eta: f64,
    pub epsilon: f64,
    pub m_picks: usize,
    /// Tightness slack used by the constants (the oracle's maximum slack).
    pub delta: f64,
    pub mu_min: f64,
    pub mu_max: f64,

    pub alpha: f64,
    pub c1: f64,
    pub c2: f64,
    #[serde(with = "extended_f64")]
    pub c3: f64,
    #[serde(with = "extended_f64")]
    pub regret_bound: f64,
    /// `epsilon <= delta / 2`.
    pub regret_guarantee_in_force: bool,

    pub d_rounds: Option<u64>,
    pub gamma: Option<f64>,
    #[serde(with = "extended_f64")]
    pub b1: f64,
    /// `gamma * delta + gamma - 1`.
    pub drift_margin: Option<f64>,
    pub zeta: f64,
    pub u_const: Option<f64>,
    pub theta: Option<f64>,
    pub v0: Option<f64>,
    pub g0: Option<f64>,
    pub t0: Option<f64>,
    /// `epsilon <= (gamma * delta + gamma - 1) / 2` with a positive margin.
    pub violation_guarantee_in_force: bool,
    pub notes: Vec<String>,
}

pub fn c1(alpha: f64) -> f64 {
    (alpha * alpha - 3.0 * alpha + 2.0) / (alpha * alpha)
}

pub fn c2(alpha: f64) -> f64 {
    1.0 / alpha - 1.0
}

/// `-ln(1 - alpha)`; infinite at `alpha = 1`.
pub fn c3(alpha: f64) -> f64 {
    -(1.0 - alpha).ln()
}

/// `1 - (1 - alpha)^d`.
pub fn gamma(alpha: f64, d: u64) -> f64 {
    1.0 - (1.0 - alpha).powf(d as f64)
}

/// Smallest `D >= 1` with `gamma(alpha, D) >= 1 / (1 + delta)`.
pub fn minimal_d(alpha: f64, delta: f64) -> Option<u64> {
    if !(delta > 0.0) || !(alpha > 0.0) {
        return None;
    }
    let target = 1.0 / (1.0 + delta);
    if alpha >= 1.0 {
        return Some(1);
    }
    let guess = ((1.0 - target).ln() / (1.0 - alpha).ln()).ceil().max(1.0);
    if !guess.is_finite() || guess > 1e15 {
        return None;
    }
    let mut d = (guess as u64).saturating_sub(2).max(1);
    while gamma(alpha, d) < target {
        d += 1;
    }
    Some(d)
}

/// Expected-maximum gap bound `1 - (1 + ln T) / ln(1 - alpha)`.
pub fn max_gap_bound(alpha: f64, horizon: u64) -> f64 {
    1.0 - (1.0 + (horizon as f64).ln()) / (1.0 - alpha).ln()
}

/// Right-hand side of the cumulative regret bound, including the outer
/// minimum with `S_max mu_max T`.
#[allow(clippy::too_many_arguments)]
pub fn regret_bound(
    num_arms: usize,
    s_max: usize,
    horizon: u64,
    eta: f64,
    mu_min: f64,
    mu_max: f64,
    alpha: f64,
) -> f64 {
    let n = num_arms as f64;
    let s = s_max as f64;
    let t = horizon as f64;
    let log_t = t.ln().max(0.0);
    let (c1, c2, c3) = (c1(alpha), c2(alpha), c3(alpha));
    let root = (6.0 * n * s * t * log_t).sqrt();
    // Terms carrying 1/eta vanish as eta -> inf and blow up at eta = 0.
    let over_eta = |x: f64| if x == 0.0 { 0.0 } else { x / eta };
    let sum = over_eta(n * t / mu_min)
        + 2.0 * root
        + n * (1.0 + 5.0 * PI * PI / 12.0)
        + over_eta(2.0 * c1 * n * t)
        + c2 * n * PI * PI / 6.0
        + (1.0 + log_t) / c3 * n * (s * t / n).ln()
        + c2 * n
        + (1.0 + log_t) * root / (2.0 * c3);
    sum.min(s * mu_max * t)
}

/// Evaluates every constant for one policy configuration. `delta` is the
/// instance's maximum slack.
pub fn compute_bounds(instance: &Instance, cfg: &PolicyConfig, horizon: u64, delta: f64) -> Result<BoundReport> {
    let family_size = instance.family().len();
    cfg.validate(family_size)?;
    if horizon == 0 {
        return Err(Error::Argument("horizon must be at least 1".into()));
    }
    let n = instance.num_arms();
    let nf = n as f64;
    let m = cfg.effective_m(family_size);
    let eta = cfg.effective_eta();
    let alpha = m as f64 / family_size as f64;
    let mu_min = instance.mu_min();
    let mu_max = instance.mu_max();
    let s_max = instance.s_max();
    let mut notes = Vec::new();

    let regret_bound = regret_bound(n, s_max, horizon, eta, mu_min, mu_max, alpha);
    let regret_in_force = delta > 0.0 && cfg.epsilon <= delta / 2.0 && cfg.variant != Variant::UcbPc;
    if cfg.variant == Variant::UcbPc {
        notes.push("ucb-pc ignores fairness queues; guarantees not in force".into());
    } else if !regret_in_force {
        notes.push(format!(
            "regret guarantee needs epsilon <= delta/2 = {:.6e}",
            delta / 2.0
        ));
    }

    let zeta = nf / mu_min;
    let d_rounds = minimal_d(alpha, delta);
    let gamma_v = d_rounds.map(|d| gamma(alpha, d));
    let b1 = match d_rounds {
        Some(d) => 2.0 * nf * d as f64 * (1.0 + eta),
        None => f64::INFINITY,
    };
    let drift_margin = gamma_v.map(|g| g * delta + g - 1.0);

    let (mut u_const, mut theta, mut v0, mut g0, mut t0) = (None, None, None, None, None);
    match (d_rounds, drift_margin) {
        (Some(d), Some(margin)) if margin > 0.0 && eta.is_finite() => {
            let d = d as f64;
            let u = 2.0 * nf / (mu_min * margin) + 8.0 * nf * d * (1.0 + eta) / margin;
            let th = 3.0 * margin / (12.0 * zeta * zeta + margin * zeta);
            let v = 8.0 / (margin * th);
            let g = nf.sqrt() * ((v + 1.0).ln() / th + zeta + u);
            u_const = Some(u);
            theta = Some(th);
            v0 = Some(v);
            g0 = Some(g);
            t0 = (cfg.epsilon > 0.0).then(|| g / cfg.epsilon);
        }
        _ => notes.push("zero-violation constants unavailable: gamma*delta + gamma - 1 <= 0".into()),
    }
    let violation_in_force = cfg.variant != Variant::UcbPc
        && cfg.epsilon > 0.0
        && drift_margin.is_some_and(|m| m > 0.0 && cfg.epsilon <= m / 2.0);
    if !violation_in_force && drift_margin.is_some_and(|m| m > 0.0) {
        notes.push(format!(
            "zero-violation guarantee needs 0 < epsilon <= {:.6e}",
            drift_margin.unwrap_or(0.0) / 2.0
        ));
    }

    Ok(BoundReport {
        num_arms: n,
        family_size,
        s_max,
        horizon,
        eta,
        epsilon: cfg.epsilon,
        m_picks: m,
        delta,
        mu_min,
        mu_max,
        alpha,
        c1: c1(alpha),
        c2: c2(alpha),
        c3: c3(alpha),
        regret_bound,
        regret_guarantee_in_force: regret_in_force,
        d_rounds,
        gamma: gamma_v,
        b1,
        drift_margin,
        zeta,
        u_const,
        theta,
        v0,
        g0,
        t0,
        violation_guarantee_in_force: violation_in_force,
        notes,
    })
}
