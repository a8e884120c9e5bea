use rand::Rng;

use super::{EnvEvent, Environment, Transition};
use crate::rng::{env_rng, StreamRng};
use crate::{Error, Result};

pub const WIDTH: i32 = 10;
pub const HEIGHT: i32 = 7;
pub const WIND: [i32; WIDTH as usize] = [0, 0, 0, 1, 1, 1, 2, 2, 1, 0];
pub const START: Cell = Cell { x: 0, y: 3 };
pub const GOAL: Cell = Cell { x: 7, y: 3 };
pub const NUM_CELLS: usize = (WIDTH * HEIGHT) as usize;
pub const NOISE_PROBABILITY: f64 = 0.1;
const GOAL_PERIOD: usize = 10;

/// Grid cell; `y` grows upward, in the direction the wind blows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    pub fn index(self) -> usize {
        (self.y * WIDTH + self.x) as usize
    }

    pub fn from_index(i: usize) -> Self {
        let i = i as i32;
        Self {
            x: i % WIDTH,
            y: i / WIDTH,
        }
    }

    fn clipped(x: i32, y: i32) -> Self {
        Self {
            x: x.clamp(0, WIDTH - 1),
            y: y.clamp(0, HEIGHT - 1),
        }
    }

    pub fn in_grid(self) -> bool {
        (0..WIDTH).contains(&self.x) && (0..HEIGHT).contains(&self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridAction {
    Up,
    Down,
    Left,
    Right,
}

impl GridAction {
    pub const ALL: [GridAction; 4] = [GridAction::Up, GridAction::Down, GridAction::Left, GridAction::Right];

    fn delta(self) -> (i32, i32) {
        match self {
            GridAction::Up => (0, 1),
            GridAction::Down => (0, -1),
            GridAction::Left => (-1, 0),
            GridAction::Right => (1, 0),
        }
    }
}

const NEIGHBOURS: [(i32, i32); 8] = [(-1, -1), (0, -1), (1, -1), (-1, 0), (1, 0), (-1, 1), (0, 1), (1, 1)];

/// Wind-and-action move, clipped to the grid. Wind is taken from the column
/// the agent is leaving.
pub fn deterministic_move(from: Cell, action: GridAction) -> Cell {
    let (dx, dy) = action.delta();
    Cell::clipped(from.x + dx, from.y + dy + WIND[from.x as usize])
}

/// Windy gridworld, optionally with the stochastic branch: with probability
/// `noise` the next cell is instead one of the 8 surrounding cells, chosen
/// uniformly by offset and clipped into the grid.
///
/// Per step the stochastic variant draws one uniform `f64`, and when the
/// branch fires one integer in `0..8`. The deterministic variant draws nothing.
#[derive(Debug, Clone)]
pub struct WindyGrid {
    position: Cell,
    goal: Cell,
    noise: f64,
    done: bool,
    rng: StreamRng,
}

impl WindyGrid {
    pub fn new(stochastic: bool, seed: u64) -> Self {
        let noise = if stochastic { NOISE_PROBABILITY } else { 0.0 };
        Self {
            position: START,
            goal: GOAL,
            noise,
            done: false,
            rng: env_rng(seed),
        }
    }

    /// Overrides the probability of the random-neighbour branch.
    pub fn with_noise_probability(mut self, p: f64) -> Self {
        self.noise = p;
        self
    }

    pub fn position(&self) -> Cell {
        self.position
    }

    pub fn goal(&self) -> Cell {
        self.goal
    }

    pub fn set_goal(&mut self, goal: Cell) {
        self.goal = goal;
    }

    pub fn is_stochastic(&self) -> bool {
        self.noise > 0.0
    }

    /// Places the agent on `cell` for testing individual moves.
    pub fn place(&mut self, cell: Cell) {
        self.position = cell;
        self.done = cell == self.goal;
    }
}

/// One step of a windy grid: returns the transition and moves the agent.
pub fn windy_step(grid: &mut WindyGrid, action: GridAction) -> Result<Transition<Cell>> {
    if grid.done {
        return Err(Error::TerminalStep);
    }
    let from = grid.position;
    let next = if grid.noise > 0.0 && grid.rng.random::<f64>() < grid.noise {
        let (dx, dy) = NEIGHBOURS[grid.rng.random_range(0..NEIGHBOURS.len())];
        Cell::clipped(from.x + dx, from.y + dy)
    } else {
        deterministic_move(from, action)
    };
    let terminal = next == grid.goal;
    grid.position = next;
    grid.done = terminal;
    Ok(Transition {
        next_observation: next,
        reward: -1.0,
        terminal,
    })
}

impl Environment for WindyGrid {
    type Obs = usize;

    fn num_actions(&self) -> usize {
        4
    }

    fn reset(&mut self) -> usize {
        self.position = START;
        self.done = false;
        START.index()
    }

    fn step(&mut self, action: usize) -> Result<Transition<usize>> {
        let t = windy_step(self, GridAction::ALL[action])?;
        Ok(Transition {
            next_observation: t.next_observation.index(),
            reward: t.reward,
            terminal: t.terminal,
        })
    }
}

/// Which cells a moving goal may be drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GoalPool {
    /// Every cell except the start.
    AllButStart,
    /// Every cell except the start that can be reached from the start.
    ReachableButStart,
}

impl GoalPool {
    pub fn cells(self) -> Vec<Cell> {
        let reachable = reachable_cells();
        (0..NUM_CELLS)
            .map(Cell::from_index)
            .filter(|&c| c != START)
            .filter(|c| self == GoalPool::AllButStart || reachable.contains(c))
            .collect()
    }
}

/// Cells reachable from the start by some sequence of deterministic moves,
/// in index order.
pub fn reachable_cells() -> Vec<Cell> {
    let mut seen = [false; NUM_CELLS];
    seen[START.index()] = true;
    let mut stack = vec![START];
    while let Some(cell) = stack.pop() {
        for action in GridAction::ALL {
            let next = deterministic_move(cell, action);
            if !seen[next.index()] {
                seen[next.index()] = true;
                stack.push(next);
            }
        }
    }
    (0..NUM_CELLS).filter(|&i| seen[i]).map(Cell::from_index).collect()
}

/// Deterministic windy grid whose goal is re-drawn every 10 episodes.
#[derive(Debug, Clone)]
pub struct MovingGoalGrid {
    grid: WindyGrid,
    episodes: usize,
    pool: Vec<Cell>,
}

impl MovingGoalGrid {
    pub fn new(seed: u64) -> Self {
        Self::with_pool(seed, GoalPool::ReachableButStart)
    }

    pub fn with_pool(seed: u64, pool: GoalPool) -> Self {
        Self {
            grid: WindyGrid::new(false, seed),
            episodes: 0,
            pool: pool.cells(),
        }
    }

    pub fn grid(&self) -> &WindyGrid {
        &self.grid
    }

    pub fn goal(&self) -> Cell {
        self.grid.goal
    }

    pub fn episodes(&self) -> usize {
        self.episodes
    }

    /// Counts a finished episode; on every 10th, draws a new goal uniformly from the pool.
    pub fn moving_goal_on_episode_end(&mut self) -> Option<Cell> {
        self.episodes += 1;
        if self.episodes.is_multiple_of(GOAL_PERIOD) {
            let goal = self.pool[self.grid.rng.random_range(0..self.pool.len())];
            self.grid.goal = goal;
            Some(goal)
        } else {
            None
        }
    }
}

impl Environment for MovingGoalGrid {
    type Obs = usize;

    fn num_actions(&self) -> usize {
        4
    }

    fn reset(&mut self) -> usize {
        self.grid.reset()
    }

    fn step(&mut self, action: usize) -> Result<Transition<usize>> {
        self.grid.step(action)
    }

    fn end_episode(&mut self) -> Option<EnvEvent> {
        self.moving_goal_on_episode_end().map(|goal| EnvEvent::GoalMoved {
            after_episode: self.episodes,
            goal,
        })
    }
}
