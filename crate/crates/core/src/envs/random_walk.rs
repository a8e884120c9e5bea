use super::{Environment, Transition};
use crate::{Error, Result};

pub const NUM_STATES: usize = 19;
const LEFT_TERMINAL: usize = 0;
const RIGHT_TERMINAL: usize = 20;
const START: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkAction {
    Left,
    Right,
}

impl WalkAction {
    pub fn from_index(i: usize) -> Self {
        if i == 0 {
            WalkAction::Left
        } else {
            WalkAction::Right
        }
    }
}

/// Deterministic move from an interior position (1..=19).
pub fn randomwalk_step(position: usize, action: WalkAction) -> Result<Transition<usize>> {
    if position == LEFT_TERMINAL || position >= RIGHT_TERMINAL {
        return Err(Error::TerminalStep);
    }
    let next = match action {
        WalkAction::Left => position - 1,
        WalkAction::Right => position + 1,
    };
    let (reward, terminal) = match next {
        LEFT_TERMINAL => (-1.0, true),
        RIGHT_TERMINAL => (1.0, true),
        _ => (0.0, false),
    };
    Ok(Transition {
        next_observation: next,
        reward,
        terminal,
    })
}

/// Values of positions 1..=19 under the equiprobable policy.
///
/// Solves the tridiagonal system `v(s) - ½v(s-1) - ½v(s+1) = 0` with boundary
/// values -1 and +1 by forward elimination and back substitution.
pub fn randomwalk_true_values() -> Vec<f64> {
    let n = NUM_STATES;
    let (lower, diag, upper) = (-0.5, 1.0, -0.5);
    let mut rhs = vec![0.0; n];
    rhs[0] = -0.5;
    rhs[n - 1] = 0.5;

    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper / diag;
    d[0] = rhs[0] / diag;
    for i in 1..n {
        let m = diag - lower * c[i - 1];
        c[i] = upper / m;
        d[i] = (rhs[i] - lower * d[i - 1]) / m;
    }
    let mut v = vec![0.0; n];
    v[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        v[i] = d[i] - c[i] * v[i + 1];
    }
    v
}

/// 19-state random walk with deterministic transitions. Observations are the
/// position 0..=20, where 0 and 20 are terminal.
#[derive(Debug, Clone)]
pub struct RandomWalk19 {
    position: usize,
}

impl RandomWalk19 {
    pub const NUM_POSITIONS: usize = 21;

    pub fn new() -> Self {
        Self { position: START }
    }

    pub fn position(&self) -> usize {
        self.position
    }

    /// Interior positions, in order, whose values are compared against the truth.
    pub fn interior() -> std::ops::RangeInclusive<usize> {
        1..=NUM_STATES
    }
}

impl Default for RandomWalk19 {
    fn default() -> Self {
        Self::new()
    }
}

impl Environment for RandomWalk19 {
    type Obs = usize;

    fn num_actions(&self) -> usize {
        2
    }

    fn reset(&mut self) -> usize {
        self.position = START;
        self.position
    }

    fn step(&mut self, action: usize) -> Result<Transition<usize>> {
        let t = randomwalk_step(self.position, WalkAction::from_index(action))?;
        self.position = t.next_observation;
        Ok(t)
    }
}
