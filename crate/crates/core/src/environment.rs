//! Ground-truth instance and Bernoulli reward generation.
//!
//! Rewards come from a counter-based stream: the draw for `(arm, round)` is
//! a pure function of `(master seed, replication, arm, round)`. Two policies
//! run on the same replication therefore see the same reward whenever they
//! pull the same arm in the same round, whatever they did before.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasible::{FamilySpec, FeasibleFamily, SuperArm};

/// Serializable description of an instance, as written in the config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub num_arms: usize,
    pub means: Vec<f64>,
    pub targets: Vec<f64>,
    pub family: FamilySpec,
    /// Optional; checked against the enumerated family when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_max: Option<usize>,
}

/// A validated instance with its enumerated family.
#[derive(Debug, Clone)]
pub struct Instance {
    means: Vec<f64>,
    targets: Vec<f64>,
    family: FeasibleFamily,
}

impl Instance {
    pub fn new(means: Vec<f64>, targets: Vec<f64>, family: FeasibleFamily) -> Result<Self> {
        let n = family.num_arms();
        if means.len() != n || targets.len() != n {
            return Err(Error::Config(format!(
                "expected {n} means and targets, got {} and {}",
                means.len(),
                targets.len()
            )));
        }
        if let Some((i, m)) = means
            .iter()
            .enumerate()
            .find(|(_, &m)| !(m > 0.0 && m <= 1.0))
        {
            return Err(Error::Config(format!("mean of arm {i} is {m}, must lie in (0, 1]")));
        }
        if let Some((i, l)) = targets
            .iter()
            .enumerate()
            .find(|(_, &l)| !(l > 0.0 && l.is_finite()))
        {
            return Err(Error::Config(format!("target of arm {i} is {l}, must be positive")));
        }
        Ok(Self {
            means,
            targets,
            family,
        })
    }

    pub fn from_spec(spec: &InstanceSpec) -> Result<Self> {
        let family = FeasibleFamily::enumerate(&spec.family, spec.num_arms)?;
        if let Some(s_max) = spec.s_max {
            if s_max != family.s_max() {
                return Err(Error::Config(format!(
                    "s_max = {s_max} but the family's largest member has {} arms",
                    family.s_max()
                )));
            }
        }
        Self::new(spec.means.clone(), spec.targets.clone(), family)
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn family(&self) -> &FeasibleFamily {
        &self.family
    }

    pub fn s_max(&self) -> usize {
        self.family.s_max()
    }

    pub fn mu_min(&self) -> f64 {
        self.means.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn mu_max(&self) -> f64 {
        self.means.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `sum_n mu_n S_n` for a super arm.
    pub fn expected_reward(&self, arm: &SuperArm) -> f64 {
        arm.weight(&self.means)
    }
}

/// One observed Bernoulli reward.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewardDraw {
    pub arm: usize,
    pub value: u8,
}

/// Seeds a ChaCha generator from `(master seed, replication, domain)`.
pub(crate) fn keyed_rng(master_seed: u64, replication: u64, domain: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&replication.to_le_bytes());
    seed[16..24].copy_from_slice(&domain.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

const REWARD_DOMAIN: u64 = 0x7265_7761_7264;

/// Reward source for one replication.
#[derive(Debug, Clone)]
pub struct RewardStream {
    per_arm: Vec<ChaCha8Rng>,
}

impl RewardStream {
    pub fn new(master_seed: u64, replication: u64, num_arms: usize) -> Self {
        let base = keyed_rng(master_seed, replication, REWARD_DOMAIN);
        let per_arm = (0..num_arms as u64)
            .map(|arm| {
                let mut rng = base.clone();
                rng.set_stream(arm);
                rng
            })
            .collect();
        Self { per_arm }
    }

    /// Uniform draw in `[0, 1)` for `(arm, round)`.
    pub fn uniform(&mut self, arm: usize, round: u64) -> f64 {
        let rng = &mut self.per_arm[arm];
        // Each u64 consumes two 32-bit words of the keystream.
        rng.set_word_pos(u128::from(round) * 2);
        (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn bernoulli(&mut self, arm: usize, round: u64, mean: f64) -> u8 {
        u8::from(self.uniform(arm, round) < mean)
    }
}

/// Rewards for every arm of `pulled` in `round`. Unpulled arms produce no
/// draw; the placeholder produces none at all.
pub fn draw_rewards(
    instance: &Instance,
    pulled: &SuperArm,
    round: u64,
    stream: &mut RewardStream,
) -> Result<Vec<RewardDraw>> {
    if pulled.is_placeholder() {
        return Ok(Vec::new());
    }
    if !instance.family().contains(pulled) {
        return Err(Error::Structural(format!(
            "super arm {:?} is not a member of the feasible family",
            pulled.arms()
        )));
    }
    Ok(pulled
        .arms()
        .iter()
        .map(|&arm| RewardDraw {
            arm,
            value: stream.bernoulli(arm, round, instance.means()[arm]),
        })
        .collect())
}
