use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::environment::{Instance, InstanceSpec};
use crate::error::{Error, Result};
use crate::feasible::FamilySpec;
use crate::policy::{PolicyConfig, Variant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Track the full-family argmax each round (best picks, queue gaps).
    #[serde(default)]
    pub shadow_argmax: bool,
    /// Check the per-step UCB drift inequalities each round.
    #[serde(default)]
    pub lemma2_assert: bool,
}

fn default_subsample() -> u64 {
    100
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// The experiment config file (one JSON document).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub instance: InstanceSpec,
    pub horizon: u64,
    pub replications: u64,
    pub master_seed: u64,
    pub sweep: Vec<PolicyConfig>,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_subsample")]
    pub subsample: u64,
    /// Slack of the benchmark used for regret. Zero gives the standard
    /// pseudo-regret; the maximum slack is always reported separately.
    #[serde(default)]
    pub benchmark_delta: f64,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks every invariant and builds the instance.
    pub fn validate(&self) -> Result<Instance> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be >= 1".into()));
        }
        if self.replications == 0 {
            return Err(Error::Config("replications must be >= 1".into()));
        }
        if self.subsample == 0 {
            return Err(Error::Config("subsample stride must be >= 1".into()));
        }
        if self.sweep.is_empty() {
            return Err(Error::Config("sweep is empty".into()));
        }
        if !(self.benchmark_delta >= 0.0 && self.benchmark_delta.is_finite()) {
            return Err(Error::Config("benchmark_delta must be finite and >= 0".into()));
        }
        if self.horizon > u64::from(u32::MAX) {
            return Err(Error::Config("horizon exceeds 2^32 rounds".into()));
        }
        let instance = Instance::from_spec(&self.instance)?;
        for (i, p) in self.sweep.iter().enumerate() {
            p.validate(instance.family().len())
                .map_err(|e| Error::Config(format!("sweep entry {i}: {e}")))?;
        }
        Ok(instance)
    }

    /// The ten-arm synthetic study: one arm per round, eta in {1, 10, 100}
    /// at M = 3 and M in {1, 2, 3} at eta = 100, epsilon = 1e-5.
    ///
    /// Horizon 2e5 and 20 replications are this crate's defaults, chosen so
    /// all curves settle; they are not prescribed by the model.
    pub fn synthetic_default() -> Self {
        let means = vec![0.6, 0.68, 0.75, 0.73, 0.65, 0.7, 0.85, 0.95, 0.9, 0.8];
        let weights = [0.6, 1.36, 2.25, 2.92, 3.25, 4.2, 5.95, 7.6, 8.1, 8.0];
        let targets = weights.iter().map(|w| 0.4 * w / 55.0).collect();
        let epsilon = 1e-5;
        let mut sweep: Vec<PolicyConfig> = [1.0, 10.0, 100.0]
            .iter()
            .map(|&eta| PolicyConfig::lcfl(eta, epsilon, 3))
            .collect();
        sweep.extend((1..=3).map(|m| PolicyConfig::lcfl(100.0, epsilon, m)));
        Self {
            instance: InstanceSpec {
                num_arms: 10,
                means,
                targets,
                family: FamilySpec::Singletons,
                s_max: Some(1),
            },
            horizon: 200_000,
            replications: 20,
            master_seed: 20_240_501,
            sweep,
            diagnostics: Diagnostics {
                shadow_argmax: true,
                lemma2_assert: true,
            },
            output_dir: default_output_dir(),
            subsample: default_subsample(),
            benchmark_delta: 0.0,
        }
    }
}

/// Directory name of a sweep entry, e.g. `02_lcfl_eta100_m3`.
pub fn entry_label(position: usize, cfg: &PolicyConfig) -> String {
    let eta = match cfg.variant {
        Variant::UcbPc => "inf".to_string(),
        Variant::QueuePc => "0".to_string(),
        _ => format!("{}", cfg.eta),
    };
    let m = match cfg.variant {
        Variant::PessimisticOptimistic => "all".to_string(),
        _ => cfg.m_picks.to_string(),
    };
    format!("{position:02}_{}_eta{eta}_m{m}", cfg.variant.label())
}
