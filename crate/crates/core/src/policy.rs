//! Low-complexity fair learning and its limiting variants.
//!
//! Every arm carries a virtual queue `Q_n` (accumulated reward debt) and a
//! truncated UCB estimate `w_n`. The weight of arm `n` is `Q_n + eta * w_n`
//! and a super arm weighs the sum over its members. Each round the policy
//! picks `M` members uniformly at random, compares them against the previous
//! selection and plays the heaviest.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::environment::{draw_rewards, Instance, RewardDraw, RewardStream};
use crate::error::{Error, Result};
use crate::feasible::{FeasibleFamily, SuperArm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Pick `M` at random, compare with the previous selection.
    Lcfl,
    /// Full-family argmax every round.
    PessimisticOptimistic,
    /// Pick-and-compare on queues alone (`eta` forced to zero).
    QueuePc,
    /// Pick-and-compare on UCB estimates alone (queues ignored).
    UcbPc,
}

impl Variant {
    pub fn label(self) -> &'static str {
        match self {
            Variant::Lcfl => "lcfl",
            Variant::PessimisticOptimistic => "pessimistic-optimistic",
            Variant::QueuePc => "queue-pc",
            Variant::UcbPc => "ucb-pc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolicyConfig {
    pub eta: f64,
    pub epsilon: f64,
    pub m_picks: usize,
    #[serde(default = "default_variant")]
    pub variant: Variant,
}

fn default_variant() -> Variant {
    Variant::Lcfl
}

impl PolicyConfig {
    pub fn lcfl(eta: f64, epsilon: f64, m_picks: usize) -> Self {
        Self {
            eta,
            epsilon,
            m_picks,
            variant: Variant::Lcfl,
        }
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn validate(&self, family_size: usize) -> Result<()> {
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::Config(format!("eta = {} must be finite and >= 0", self.eta)));
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::Config(format!("epsilon = {} must lie in [0, 1)", self.epsilon)));
        }
        if self.variant != Variant::PessimisticOptimistic
            && (self.m_picks == 0 || self.m_picks > family_size)
        {
            return Err(Error::Config(format!(
                "m_picks = {} must lie in [1, {family_size}]",
                self.m_picks
            )));
        }
        Ok(())
    }

    /// `M` actually used: the full family for pessimistic-optimistic.
    pub fn effective_m(&self, family_size: usize) -> usize {
        match self.variant {
            Variant::PessimisticOptimistic => family_size,
            _ => self.m_picks,
        }
    }

    /// `eta` actually applied to UCB estimates, infinite for ucb-pc.
    pub fn effective_eta(&self) -> f64 {
        match self.variant {
            Variant::QueuePc => 0.0,
            Variant::UcbPc => f64::INFINITY,
            _ => self.eta,
        }
    }

    /// Weight evaluations per round.
    pub fn comparisons_per_round(&self, family_size: usize) -> u64 {
        match self.variant {
            Variant::PessimisticOptimistic => family_size as u64,
            _ => self.m_picks as u64 + 1,
        }
    }
}

/// Truncated UCB estimate for one arm at round `round`.
///
/// Unpulled arms get 1. Otherwise the sample mean plus
/// `sqrt(3 ln t / (2 H))`, capped at 1, with `ln t` clamped at zero.
pub fn ucb_weight(pulls: u64, reward_sum: u64, round: u64) -> f64 {
    if pulls == 0 {
        return 1.0;
    }
    let h = pulls as f64;
    let log_t = if round == 0 { 0.0 } else { (round as f64).ln().max(0.0) };
    let bonus = (3.0 * log_t / (2.0 * h)).sqrt();
    (reward_sum as f64 / h + bonus).min(1.0)
}

/// One step of the virtual queue: `max(q + target - pulled * reward + pad, 0)`.
pub fn queue_update(q: f64, target: f64, pad: f64, pulled: bool, reward: bool) -> f64 {
    let service = if pulled && reward { 1.0 } else { 0.0 };
    (q + target - service + pad).max(0.0)
}

/// Per-arm learning and fairness state.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyState {
    pub round: u64,
    pub queues: Vec<f64>,
    pub pulls: Vec<u64>,
    pub reward_sums: Vec<u64>,
    pub ucb: Vec<f64>,
    /// Canonical index of the previous selection; `None` is the empty
    /// placeholder.
    pub prev_selection: Option<usize>,
}

impl PolicyState {
    pub fn new(num_arms: usize) -> Self {
        Self {
            round: 0,
            queues: vec![0.0; num_arms],
            pulls: vec![0; num_arms],
            reward_sums: vec![0; num_arms],
            ucb: vec![1.0; num_arms],
            prev_selection: None,
        }
    }

    pub fn num_arms(&self) -> usize {
        self.queues.len()
    }

    /// Per-arm weights `Q_n + eta * w_n` for the given variant.
    pub fn arm_weights(&self, cfg: &PolicyConfig) -> Vec<f64> {
        let mut out = vec![0.0; self.num_arms()];
        self.fill_arm_weights(cfg, &mut out);
        out
    }

    pub fn fill_arm_weights(&self, cfg: &PolicyConfig, out: &mut [f64]) {
        match cfg.variant {
            Variant::UcbPc => out.copy_from_slice(&self.ucb),
            Variant::QueuePc => out.copy_from_slice(&self.queues),
            Variant::Lcfl | Variant::PessimisticOptimistic => {
                for ((o, q), w) in out.iter_mut().zip(&self.queues).zip(&self.ucb) {
                    *o = q + cfg.eta * w;
                }
            }
        }
    }
}

/// Weight of a super arm under the plain `Q + eta * w` rule.
/// The placeholder weighs zero.
pub fn superarm_weight(s: &SuperArm, state: &PolicyState, eta: f64) -> f64 {
    s.arms()
        .iter()
        .map(|&a| state.queues[a] + eta * state.ucb[a])
        .sum()
}

/// What happened in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub round: u64,
    pub selected: usize,
    /// Members drawn in the pick step (empty for pessimistic-optimistic).
    pub sampled: Vec<usize>,
    pub draws: Vec<RewardDraw>,
    pub comparisons: u64,
}

/// Scratch buffers reused across rounds.
#[derive(Debug, Default)]
pub struct StepScratch {
    weights: Vec<f64>,
    sampled: Vec<usize>,
}

/// Heaviest candidate, smallest canonical index on ties, and the number of
/// weight evaluations spent. With `incumbent_slot` set the previous
/// selection takes part; before the first round that slot holds the
/// placeholder, which counts as one evaluation and loses every tie.
fn compare_step(
    family: &FeasibleFamily,
    weights: &[f64],
    candidates: impl IntoIterator<Item = usize>,
    incumbent: Option<usize>,
    incumbent_slot: bool,
) -> (usize, u64) {
    let mut evaluations = u64::from(incumbent_slot && incumbent.is_none());
    let mut best: Option<(usize, f64)> = None;
    for idx in incumbent.into_iter().chain(candidates) {
        let w = family.members()[idx].weight(weights);
        evaluations += 1;
        best = match best {
            Some((b, bw)) if bw > w || (bw == w && b <= idx) => Some((b, bw)),
            _ => Some((idx, w)),
        };
    }
    (best.expect("at least one candidate").0, evaluations)
}

/// Runs one round: pick, compare, pull, then update counts, queues and UCB
/// estimates for the next round.
pub fn lcfl_step<R: Rng + ?Sized>(
    state: &mut PolicyState,
    instance: &Instance,
    cfg: &PolicyConfig,
    rewards: &mut RewardStream,
    rng: &mut R,
) -> Result<StepOutcome> {
    let mut scratch = StepScratch::default();
    let mut outcome = lcfl_step_with(state, instance, cfg, rewards, rng, &mut scratch)?;
    outcome.sampled = scratch.sampled;
    Ok(outcome)
}

/// Same as [`lcfl_step`] but reuses `scratch`; `sampled` in the outcome is
/// left empty and the sample stays readable through [`StepScratch::sampled`].
pub fn lcfl_step_with<R: Rng + ?Sized>(
    state: &mut PolicyState,
    instance: &Instance,
    cfg: &PolicyConfig,
    rewards: &mut RewardStream,
    rng: &mut R,
    scratch: &mut StepScratch,
) -> Result<StepOutcome> {
    let family = instance.family();
    let n = state.num_arms();
    scratch.weights.resize(n, 0.0);
    state.fill_arm_weights(cfg, &mut scratch.weights);

    let (selected, comparisons) = match cfg.variant {
        Variant::PessimisticOptimistic => {
            scratch.sampled.clear();
            compare_step(family, &scratch.weights, 0..family.len(), None, false)
        }
        _ => {
            scratch.sampled = family.sample_distinct(cfg.m_picks, rng)?;
            compare_step(
                family,
                &scratch.weights,
                scratch.sampled.iter().copied(),
                state.prev_selection,
                true,
            )
        }
    };

    let t = state.round;
    let arm = &family.members()[selected];
    let draws = draw_rewards(instance, arm, t, rewards)?;

    let mut served = vec![false; n];
    for d in &draws {
        state.pulls[d.arm] += 1;
        state.reward_sums[d.arm] += u64::from(d.value);
        served[d.arm] = d.value == 1;
    }
    for a in 0..n {
        state.queues[a] = queue_update(
            state.queues[a],
            instance.targets()[a],
            cfg.epsilon,
            arm.contains(a),
            served[a],
        );
        state.ucb[a] = ucb_weight(state.pulls[a], state.reward_sums[a], t + 1);
    }
    state.prev_selection = Some(selected);
    state.round = t + 1;

    Ok(StepOutcome {
        round: t,
        selected,
        sampled: Vec::new(),
        draws,
        comparisons,
    })
}

impl StepScratch {
    pub fn sampled(&self) -> &[usize] {
        &self.sampled
    }
}
