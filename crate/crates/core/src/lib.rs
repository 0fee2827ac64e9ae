//! Combinatorial multi-armed bandits with long-term per-arm fairness
//! targets, learned by a low-complexity pick-and-compare rule.
//!
//! The crate is organised bottom-up:
//!
//! - [`feasible`]: feasible super-arm families, canonical order, uniform
//!   sampling.
//! - [`environment`]: ground-truth means and a counter-based Bernoulli
//!   reward stream.
//! - [`policy`]: UCB estimates, virtual queues and the pick-and-compare
//!   step with its limiting variants.
//! - [`oracle`]: the benchmark LP (solved by [`simplex`]), maximum slack and
//!   full-family argmax.
//! - [`metrics`] and [`bounds`]: regret, fairness violation, zero-violation
//!   points, best-pick statistics and every analytical constant.
//! - [`experiment`]: config files, replicated sweeps, CSV traces and
//!   summaries.
//!
//! See the `examples/` directory of this crate for one runnable program per
//! capability.

pub mod bounds;
pub mod environment;
pub mod error;
pub mod experiment;
pub mod feasible;
pub mod metrics;
pub mod oracle;
pub mod policy;
pub mod simplex;

pub use bounds::{compute_bounds, BoundReport};
pub use environment::{draw_rewards, Instance, InstanceSpec, RewardDraw, RewardStream};
pub use error::{Error, Result};
pub use feasible::{FamilySpec, FeasibleFamily, SuperArm};
pub use metrics::RunTrace;
pub use oracle::{full_argmax, max_slack, solve_benchmark, OracleSolution};
pub use policy::{lcfl_step, queue_update, superarm_weight, ucb_weight, PolicyConfig, PolicyState, Variant};
