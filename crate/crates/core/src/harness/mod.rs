//! Seeded experiments, sweeps, statistics and CSV output.

pub mod config;
pub mod csv_io;
pub mod figures;
pub mod stats;
pub mod sweep;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::agent::{run_episode, state_values_from_q, ActionValueFunction, AgentConfig, LinearQ, TabularQ};
use crate::envs::{
    randomwalk_true_values, windy, CartPole, EnvEvent, EnvId, Environment, GoalPool, MountainCar, MovingGoalGrid,
    RandomWalk19, WindyGrid,
};
use crate::policy::PolicyKind;
use crate::rng::{agent_rng, derive_seed};
use crate::sigma::{SchemeKind, SigmaScheme};
use crate::tilecoding::TileCoderConfig;
use crate::{Error, Result};

pub use stats::{aggregate, moving_average, rms_error, AggregateCurve};
pub use sweep::{run_sweep, Objective, SweepRow, SweepSpec, SweepTable};

/// Trace cutoff used for tile-coded agents.
pub const LINEAR_TRACE_CUTOFF: f64 = 1e-12;

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub env: EnvId,
    pub scheme: SchemeKind<f64>,
    /// Nominal step size; divided by the number of tilings when
    /// `divide_alpha_by_tilings` is set.
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub policy: PolicyKind<f64>,
    pub num_episodes: usize,
    pub base_seed: u64,
    pub run_index: u64,
    pub max_steps_per_episode: usize,
    pub divide_alpha_by_tilings: bool,
    pub goal_pool: GoalPool,
}

impl RunSpec {
    /// Defaults for an environment: γ = 1, ε-greedy(0.1) (equiprobable on the
    /// random walk), the environment's step cap, and tilings-normalised α for
    /// tile-coded environments.
    pub fn new(env: EnvId, scheme: SchemeKind<f64>, alpha: f64, lambda: f64, num_episodes: usize) -> Self {
        let policy = match env {
            EnvId::RandomWalk19 => PolicyKind::Equiprobable,
            _ => PolicyKind::EpsilonGreedy(0.1),
        };
        Self {
            env,
            scheme,
            alpha,
            gamma: 1.0,
            lambda,
            policy,
            num_episodes,
            base_seed: 0,
            run_index: 0,
            max_steps_per_episode: env.default_step_cap(),
            divide_alpha_by_tilings: env.uses_tile_coding(),
            goal_pool: GoalPool::ReachableButStart,
        }
    }

    pub fn with_seed(mut self, base_seed: u64) -> Self {
        self.base_seed = base_seed;
        self
    }

    pub fn with_run_index(mut self, run_index: u64) -> Self {
        self.run_index = run_index;
        self
    }

    pub fn seed(&self) -> u64 {
        derive_seed(self.base_seed, self.run_index)
    }

    pub fn agent_config(&self, num_tilings: usize) -> Result<AgentConfig<f64>> {
        let alpha = if self.divide_alpha_by_tilings && self.env.uses_tile_coding() {
            self.alpha / num_tilings as f64
        } else {
            self.alpha
        };
        let cutoff = if self.env.uses_tile_coding() {
            LINEAR_TRACE_CUTOFF
        } else {
            0.0
        };
        AgentConfig::new(alpha, self.gamma, self.lambda, self.policy)
            .map(|c| c.with_max_steps(self.max_steps_per_episode).with_trace_cutoff(cutoff))
    }
}

/// Per-episode series that can be aggregated across runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Return,
    Steps,
    Rms,
    Sigma,
}

impl Metric {
    pub fn default_for(env: EnvId) -> Self {
        if env == EnvId::RandomWalk19 {
            Metric::Rms
        } else {
            Metric::Return
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Return => "return",
            Metric::Steps => "steps",
            Metric::Rms => "rms",
            Metric::Sigma => "sigma",
        })
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "return" => Ok(Metric::Return),
            "steps" => Ok(Metric::Steps),
            "rms" => Ok(Metric::Rms),
            "sigma" => Ok(Metric::Sigma),
            other => Err(Error::Parse(format!("unknown metric `{other}`"))),
        }
    }
}

/// Outcome of one seeded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_index: u64,
    pub seed: u64,
    pub returns: Vec<f64>,
    pub steps: Vec<usize>,
    /// RMS error of the state-value estimate after each episode (random walk only).
    pub rms: Option<Vec<f64>>,
    /// Mean σ used within each episode.
    pub mean_sigma: Vec<f64>,
    pub events: Vec<EnvEvent>,
    pub capped_episodes: usize,
    pub tile_overflows: u64,
}

impl RunRecord {
    pub fn series(&self, metric: Metric) -> Option<Vec<f64>> {
        match metric {
            Metric::Return => Some(self.returns.clone()),
            Metric::Steps => Some(self.steps.iter().map(|&s| s as f64).collect()),
            Metric::Rms => self.rms.clone(),
            Metric::Sigma => Some(self.mean_sigma.clone()),
        }
    }

    pub fn total_return(&self) -> f64 {
        self.returns.iter().sum()
    }

    pub fn mean_return(&self) -> f64 {
        self.total_return() / self.returns.len() as f64
    }
}

/// Runs `spec.num_episodes` episodes and records per-episode statistics.
///
/// The run seed is `derive_seed(base_seed, run_index)`; action selection uses
/// its agent stream and the environment its own stream.
pub fn run_experiment(spec: &RunSpec) -> Result<RunRecord> {
    let seed = spec.seed();
    let scheme = SigmaScheme::new(spec.scheme)?;
    let record = match spec.env {
        EnvId::RandomWalk19 => {
            let truth = randomwalk_true_values();
            let q = TabularQ::new(RandomWalk19::NUM_POSITIONS, 2)?;
            let policy = spec.policy;
            let eval = move |q: &TabularQ<f64>| -> Result<Option<f64>> {
                let v = state_values_from_q(q, policy)?;
                let interior: Vec<f64> = RandomWalk19::interior().map(|s| v[s]).collect();
                Ok(Some(rms_error(&interior, &truth)?))
            };
            drive(RandomWalk19::new(), q, scheme, spec, 1, seed, eval)?
        }
        EnvId::Windy | EnvId::StochasticWindy => {
            let env = WindyGrid::new(spec.env == EnvId::StochasticWindy, seed);
            let q = TabularQ::new(windy::NUM_CELLS, 4)?;
            drive(env, q, scheme, spec, 1, seed, no_eval)?
        }
        EnvId::MovingGoal => {
            let env = MovingGoalGrid::with_pool(seed, spec.goal_pool);
            let q = TabularQ::new(windy::NUM_CELLS, 4)?;
            drive(env, q, scheme, spec, 1, seed, no_eval)?
        }
        EnvId::MountainCar => {
            let config = TileCoderConfig::mountain_car();
            let tilings = config.num_tilings;
            let q = LinearQ::new(config, 3)?;
            drive_linear(MountainCar::new(seed), q, scheme, spec, tilings, seed)?
        }
        EnvId::CartPole => {
            let config = TileCoderConfig::cart_pole();
            let tilings = config.num_tilings;
            let q = LinearQ::new(config, 2)?;
            drive_linear(CartPole::new(seed), q, scheme, spec, tilings, seed)?
        }
    };
    Ok(record)
}

fn no_eval<Q>(_: &Q) -> Result<Option<f64>> {
    Ok(None)
}

fn drive_linear<E>(
    env: E,
    q: LinearQ<f64>,
    scheme: SigmaScheme<f64>,
    spec: &RunSpec,
    tilings: usize,
    seed: u64,
) -> Result<RunRecord>
where
    E: Environment,
    E::Obs: AsRef<[f64]>,
{
    let mut overflow = 0;
    let mut record = drive(env, q, scheme, spec, tilings, seed, |q: &LinearQ<f64>| {
        overflow = q.coder().table().overflow_count();
        Ok(None)
    })?;
    record.tile_overflows = overflow;
    Ok(record)
}

fn drive<E, Q, F>(
    mut env: E,
    mut q: Q,
    mut scheme: SigmaScheme<f64>,
    spec: &RunSpec,
    tilings: usize,
    seed: u64,
    mut eval: F,
) -> Result<RunRecord>
where
    E: Environment,
    Q: ActionValueFunction<f64, E::Obs>,
    F: FnMut(&Q) -> Result<Option<f64>>,
{
    let config = spec.agent_config(tilings)?;
    let mut rng = agent_rng(seed);
    let mut trace = q.new_trace();
    let n = spec.num_episodes;
    let mut record = RunRecord {
        run_index: spec.run_index,
        seed,
        returns: Vec::with_capacity(n),
        steps: Vec::with_capacity(n),
        rms: None,
        mean_sigma: Vec::with_capacity(n),
        events: Vec::new(),
        capped_episodes: 0,
        tile_overflows: 0,
    };
    let mut rms = Vec::with_capacity(n);
    for episode in 0..n {
        let result = run_episode(&mut env, &mut q, &mut trace, &mut scheme, &config, &mut rng).map_err(|e| {
            e.at(|site| {
                site.episode = Some(episode);
                site.run = Some(spec.run_index as usize);
            })
        })?;
        record.returns.push(result.total_return);
        record.steps.push(result.steps);
        record.mean_sigma.push(result.mean_sigma());
        if !result.reached_terminal {
            record.capped_episodes += 1;
        }
        if let Some(event) = env.end_episode() {
            record.events.push(event);
        }
        if let Some(r) = eval(&q)? {
            rms.push(r);
        }
    }
    if !rms.is_empty() {
        record.rms = Some(rms);
    }
    Ok(record)
}

/// Runs `num_runs` copies of `template` with run indices `0..num_runs`, in parallel.
/// Records come back ordered by run index.
pub fn run_many(template: &RunSpec, num_runs: usize) -> Result<Vec<RunRecord>> {
    (0..num_runs as u64)
        .into_par_iter()
        .map(|i| run_experiment(&template.clone().with_run_index(i)))
        .collect()
}

/// Aggregates one metric across records (smoothing each run first when `smooth_window > 1`).
pub fn aggregate_metric(
    records: &[RunRecord],
    metric: Metric,
    confidence: f64,
    smooth_window: usize,
) -> Result<AggregateCurve> {
    let series = records
        .iter()
        .map(|r| {
            let s = r.series(metric).ok_or_else(|| {
                Error::InvalidParameter(format!("metric `{metric}` is not recorded for this environment"))
            })?;
            if smooth_window > 1 {
                moving_average(&s, smooth_window)
            } else {
                Ok(s)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    aggregate(&series, confidence)
}
