use rand::Rng;

use super::{Environment, Transition};
use crate::rng::{env_rng, StreamRng};
use crate::{Error, Result};

pub const MIN_POSITION: f64 = -1.2;
pub const MAX_POSITION: f64 = 0.5;
pub const MAX_SPEED: f64 = 0.07;
pub(super) const STEP_CAP: usize = 3000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MountainCarState {
    pub position: f64,
    pub velocity: f64,
}

impl MountainCarState {
    pub fn is_terminal(&self) -> bool {
        self.position >= MAX_POSITION
    }

    pub fn observation(&self) -> [f64; 2] {
        [self.position, self.velocity]
    }
}

/// Throttle for action index 0, 1, 2: reverse, coast, forward.
pub fn throttle(action: usize) -> f64 {
    action as f64 - 1.0
}

pub fn mountaincar_step(state: MountainCarState, action: usize) -> Result<Transition<MountainCarState>> {
    if state.is_terminal() {
        return Err(Error::TerminalStep);
    }
    let velocity = (state.velocity + 0.001 * throttle(action) - 0.0025 * (3.0 * state.position).cos())
        .clamp(-MAX_SPEED, MAX_SPEED);
    let position = (state.position + velocity).clamp(MIN_POSITION, MAX_POSITION);
    let velocity = if position == MIN_POSITION { 0.0 } else { velocity };
    let next = MountainCarState { position, velocity };
    Ok(Transition {
        next_observation: next,
        reward: -1.0,
        terminal: next.is_terminal(),
    })
}

/// Mountain car; starts at rest with position uniform in [-0.6, -0.4).
/// Each reset draws one `f64` from the environment stream.
#[derive(Debug, Clone)]
pub struct MountainCar {
    state: MountainCarState,
    rng: StreamRng,
}

impl MountainCar {
    pub fn new(seed: u64) -> Self {
        Self {
            state: MountainCarState {
                position: -0.5,
                velocity: 0.0,
            },
            rng: env_rng(seed),
        }
    }

    pub fn state(&self) -> MountainCarState {
        self.state
    }
}

impl Environment for MountainCar {
    type Obs = [f64; 2];

    fn num_actions(&self) -> usize {
        3
    }

    fn reset(&mut self) -> [f64; 2] {
        let position = self.rng.random_range(-0.6..-0.4);
        self.state = MountainCarState {
            position,
            velocity: 0.0,
        };
        self.state.observation()
    }

    fn step(&mut self, action: usize) -> Result<Transition<[f64; 2]>> {
        let t = mountaincar_step(self.state, action)?;
        self.state = t.next_observation;
        Ok(Transition {
            next_observation: self.state.observation(),
            reward: t.reward,
            terminal: t.terminal,
        })
    }

    fn default_step_cap(&self) -> usize {
        STEP_CAP
    }
}
