//! Q(σ, λ) control and prediction with accumulating eligibility traces.
//!
//! The crate is organised bottom-up:
//!
//! - [`policy`]: ε-greedy / equiprobable action distributions and their expectations.
//! - [`sigma`]: σ-selection schemes (constant, per-episode decay, TD-error ratio, combined).
//! - [`agent`]: the Q(σ, λ) episode loop over tabular or tile-coded linear action values.
//! - [`envs`]: 19-state random walk, (stochastic / moving-goal) windy gridworld,
//!   mountain car and cart-pole.
//! - [`tilecoding`]: hashed tile coding with an index hash table.
//! - [`harness`]: seeded runs, sweeps, statistics and CSV output.
//!
//! Learning arithmetic is generic over a [`Scalar`] (`f32` or `f64`); the harness and
//! environments work in `f64`. The aliases at the crate root fix the scalar to `f64`.

pub mod agent;
pub mod envs;
mod error;
pub mod harness;
pub mod policy;
pub mod rng;
mod scalar;
pub mod sigma;
pub mod tilecoding;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type PolicyDistribution = policy::PolicyDistribution<f64>;
pub type PolicyKind = policy::PolicyKind<f64>;
pub type SigmaScheme = sigma::SigmaScheme<f64>;
pub type AgentConfig = agent::AgentConfig<f64>;
pub type TabularQ = agent::TabularQ<f64>;
pub type LinearQ = agent::LinearQ<f64>;
pub type EligibilityTrace = agent::EligibilityTrace<f64>;
pub type EpisodeResult = agent::EpisodeResult<f64>;
