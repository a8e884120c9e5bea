//! Benchmark environments.
//!
//! Every environment owns its random stream (if it has any stochasticity), so
//! cloning an environment clones its RNG state too.

mod cart_pole;
mod mountain_car;
mod random_walk;
pub mod windy;

use std::fmt;
use std::str::FromStr;

pub use cart_pole::{cartpole_step, CartPole, CartPoleAction, CartPoleState};
pub use mountain_car::{mountaincar_step, MountainCar, MountainCarState};
pub use random_walk::{randomwalk_step, randomwalk_true_values, RandomWalk19, WalkAction};
pub use windy::{reachable_cells, windy_step, Cell, GoalPool, GridAction, MovingGoalGrid, WindyGrid};

use crate::{Error, Result};

/// Outcome of one environment step.
///
/// When `terminal` is set, `next_observation` is the terminal sentinel of the
/// environment and is never bootstrapped from.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition<O> {
    pub next_observation: O,
    pub reward: f64,
    pub terminal: bool,
}

/// Something notable an environment did at an episode boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvEvent {
    GoalMoved { after_episode: usize, goal: Cell },
}

pub trait Environment {
    type Obs: Clone;

    fn num_actions(&self) -> usize;

    /// Starts a new episode and returns a non-terminal observation.
    fn reset(&mut self) -> Self::Obs;

    fn step(&mut self, action: usize) -> Result<Transition<Self::Obs>>;

    /// Called once after every episode, including capped ones.
    fn end_episode(&mut self) -> Option<EnvEvent> {
        None
    }

    /// Default per-episode step cap used by the harness.
    fn default_step_cap(&self) -> usize {
        10_000
    }
}

/// Environment identifiers accepted on the command line and in config files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EnvId {
    RandomWalk19,
    Windy,
    StochasticWindy,
    MovingGoal,
    MountainCar,
    CartPole,
}

impl EnvId {
    pub const ALL: [EnvId; 6] = [
        EnvId::RandomWalk19,
        EnvId::Windy,
        EnvId::StochasticWindy,
        EnvId::MovingGoal,
        EnvId::MountainCar,
        EnvId::CartPole,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvId::RandomWalk19 => "randomwalk19",
            EnvId::Windy => "windy",
            EnvId::StochasticWindy => "swg",
            EnvId::MovingGoal => "movinggoal",
            EnvId::MountainCar => "mountaincar",
            EnvId::CartPole => "cartpole",
        }
    }

    /// Whether the environment uses tile-coded linear action values.
    pub fn uses_tile_coding(self) -> bool {
        matches!(self, EnvId::MountainCar | EnvId::CartPole)
    }

    pub fn default_step_cap(self) -> usize {
        match self {
            EnvId::MountainCar => mountain_car::STEP_CAP,
            EnvId::CartPole => cart_pole::STEP_CAP,
            _ => 10_000,
        }
    }
}

impl fmt::Display for EnvId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EnvId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnvId::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown environment `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip() {
        for id in EnvId::ALL {
            assert_eq!(id.name().parse::<EnvId>().unwrap(), id);
        }
        assert!("gridworld".parse::<EnvId>().is_err());
    }
}
