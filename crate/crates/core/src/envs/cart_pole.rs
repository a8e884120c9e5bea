use rand::Rng;

use super::{Environment, Transition};
use crate::rng::{env_rng, StreamRng};
use crate::{Error, Result};

const GRAVITY: f64 = 9.8;
const CART_MASS: f64 = 1.0;
const POLE_MASS: f64 = 0.1;
const TOTAL_MASS: f64 = CART_MASS + POLE_MASS;
const HALF_LENGTH: f64 = 0.5;
const POLE_MASS_LENGTH: f64 = POLE_MASS * HALF_LENGTH;
const FORCE: f64 = 10.0;
const TAU: f64 = 0.02;
pub const POSITION_LIMIT: f64 = 2.4;
pub(super) const STEP_CAP: usize = 100_000;

pub fn angle_limit() -> f64 {
    12.0f64.to_radians()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CartPoleAction {
    PushLeft,
    PushRight,
}

impl CartPoleAction {
    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            CartPoleAction::PushLeft
        } else {
            CartPoleAction::PushRight
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CartPoleState {
    pub position: f64,
    pub velocity: f64,
    /// Radians from upright.
    pub angle: f64,
    pub angular_velocity: f64,
}

impl CartPoleState {
    pub fn is_terminal(&self) -> bool {
        self.angle.abs() > angle_limit() || self.position.abs() > POSITION_LIMIT
    }

    pub fn observation(&self) -> [f64; 4] {
        [self.position, self.velocity, self.angle, self.angular_velocity]
    }
}

/// Euler step of the classic pole-balancing dynamics; +1 reward per step.
pub fn cartpole_step(state: CartPoleState, action: CartPoleAction) -> Result<Transition<CartPoleState>> {
    if state.is_terminal() {
        return Err(Error::TerminalStep);
    }
    let force = match action {
        CartPoleAction::PushLeft => -FORCE,
        CartPoleAction::PushRight => FORCE,
    };
    let (sin, cos) = state.angle.sin_cos();
    let temp = (force + POLE_MASS_LENGTH * state.angular_velocity * state.angular_velocity * sin) / TOTAL_MASS;
    let angular_acc = (GRAVITY * sin - cos * temp) / (HALF_LENGTH * (4.0 / 3.0 - POLE_MASS * cos * cos / TOTAL_MASS));
    let acc = temp - POLE_MASS_LENGTH * angular_acc * cos / TOTAL_MASS;

    let next = CartPoleState {
        position: state.position + TAU * state.velocity,
        velocity: state.velocity + TAU * acc,
        angle: state.angle + TAU * state.angular_velocity,
        angular_velocity: state.angular_velocity + TAU * angular_acc,
    };
    Ok(Transition {
        next_observation: next,
        reward: 1.0,
        terminal: next.is_terminal(),
    })
}

/// Cart-pole; each reset draws the four state components uniformly from
/// [-0.05, 0.05), in field order, from the environment stream.
#[derive(Debug, Clone)]
pub struct CartPole {
    state: CartPoleState,
    rng: StreamRng,
}

impl CartPole {
    pub fn new(seed: u64) -> Self {
        Self {
            state: CartPoleState::default(),
            rng: env_rng(seed),
        }
    }

    pub fn state(&self) -> CartPoleState {
        self.state
    }
}

impl Environment for CartPole {
    type Obs = [f64; 4];

    fn num_actions(&self) -> usize {
        2
    }

    fn reset(&mut self) -> [f64; 4] {
        let mut draw = || self.rng.random_range(-0.05..0.05);
        self.state = CartPoleState {
            position: draw(),
            velocity: draw(),
            angle: draw(),
            angular_velocity: draw(),
        };
        self.state.observation()
    }

    fn step(&mut self, action: usize) -> Result<Transition<[f64; 4]>> {
        let t = cartpole_step(self.state, CartPoleAction::from_index(action))?;
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
