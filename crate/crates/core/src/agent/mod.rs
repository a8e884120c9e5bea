//! The Q(σ, λ) episode loop with accumulating traces.
//!
//! One step, in order:
//!
//! 1. take `A_t`, observe `R_{t+1}`, `S_{t+1}`;
//! 2. draw `A_{t+1}` from the policy at `S_{t+1}` (skipped on terminal);
//! 3. `V_{t+1} = Σ π(a|S_{t+1}) Q(S_{t+1}, a)`;
//! 4. `δ = R + γ(σ Q(S_{t+1}, A_{t+1}) + (1-σ) V_{t+1}) - Q(S_t, A_t)`;
//! 5. hand δ to the σ scheme;
//! 6. `E(S_t, A_t) += 1` (or the active features of `(S_t, A_t)`);
//! 7. `Q += α δ E`;
//! 8. `E *= γλ(σ + (1-σ) π(A_{t+1}|S_{t+1}))`.
//!
//! σ on a step is the scheme's value before that step's δ was observed.
//! Terminal next states bootstrap with zero.

mod qfunc;
mod trace;

pub use qfunc::{ActionValueFunction, LinearQ, TabularQ};
pub use trace::EligibilityTrace;

use rand::Rng;

use crate::envs::Environment;
use crate::policy::{expected_value, policy_distribution, sample_action, PolicyDistribution, PolicyKind};
use crate::sigma::SigmaScheme;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct AgentConfig<T> {
    /// Effective step size (already divided by the number of tilings where that applies).
    pub alpha: T,
    pub gamma: T,
    pub lambda: T,
    pub policy: PolicyKind<T>,
    pub max_steps_per_episode: usize,
    /// Trace entries at or below this after decay are dropped. Zero keeps the
    /// update exact; tile-coded agents use a tiny positive value to bound work.
    pub trace_cutoff: T,
}

impl<T: Scalar> AgentConfig<T> {
    pub fn new(alpha: T, gamma: T, lambda: T, policy: PolicyKind<T>) -> Result<Self> {
        let config = Self {
            alpha,
            gamma,
            lambda,
            policy,
            max_steps_per_episode: 10_000,
            trace_cutoff: T::zero(),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps_per_episode = max_steps;
        self
    }

    pub fn with_trace_cutoff(mut self, cutoff: T) -> Self {
        self.trace_cutoff = cutoff;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |x: T| x >= T::zero() && x <= T::one();
        let problem = if !(self.alpha >= T::zero() && self.alpha.is_finite()) {
            Some(format!(
                "alpha must be a non-negative finite number, got {}",
                self.alpha
            ))
        } else if !unit(self.gamma) {
            Some(format!("gamma must lie in [0, 1], got {}", self.gamma))
        } else if !unit(self.lambda) {
            Some(format!("lambda must lie in [0, 1], got {}", self.lambda))
        } else if self.max_steps_per_episode == 0 {
            Some("max_steps_per_episode must be positive".to_string())
        } else if let PolicyKind::EpsilonGreedy(eps) = self.policy {
            (!unit(eps)).then(|| format!("epsilon must lie in [0, 1], got {eps}"))
        } else {
            None
        };
        match problem {
            Some(msg) => Err(Error::InvalidParameter(msg)),
            None => Ok(()),
        }
    }
}

/// `r + γ(σ q_next + (1-σ) v_next) - q_current`.
pub fn td_error<T: Scalar>(reward: T, gamma: T, sigma: T, q_next_sampled: T, v_next_expected: T, q_current: T) -> T {
    reward + gamma * (sigma * q_next_sampled + (T::one() - sigma) * v_next_expected) - q_current
}

/// `γλ(σ + (1-σ)π(A_{t+1}|S_{t+1}))`.
pub fn trace_decay_factor<T: Scalar>(gamma: T, lambda: T, sigma: T, pi_next: T) -> T {
    gamma * lambda * (sigma + (T::one() - sigma) * pi_next)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult<T> {
    /// Undiscounted sum of rewards.
    pub total_return: f64,
    pub steps: usize,
    pub td_errors: Vec<T>,
    /// σ used on each step.
    pub sigmas: Vec<T>,
    /// False when the episode was cut off by the step cap.
    pub reached_terminal: bool,
}

impl<T: Scalar> EpisodeResult<T> {
    /// Mean σ over the episode, as a running mean so a constant σ is reproduced exactly.
    pub fn mean_sigma(&self) -> f64 {
        running_mean(self.sigmas.iter().map(|s| s.as_f64()))
    }
}

pub(crate) fn running_mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut mean = 0.0;
    for (k, x) in values.enumerate() {
        mean += (x - mean) / (k + 1) as f64;
    }
    mean
}

/// Runs one episode of Q(σ, λ).
///
/// The trace is cleared and the environment reset first. The scheme's
/// `end_episode` is called when the episode terminates or hits the step cap.
/// `rng` drives action selection only: one draw for `A_0` and one per
/// non-terminal step.
pub fn run_episode<T, E, Q, R>(
    env: &mut E,
    q: &mut Q,
    trace: &mut EligibilityTrace<T>,
    scheme: &mut SigmaScheme<T>,
    config: &AgentConfig<T>,
    rng: &mut R,
) -> Result<EpisodeResult<T>>
where
    T: Scalar,
    E: Environment,
    Q: ActionValueFunction<T, E::Obs>,
    R: Rng + ?Sized,
{
    let at_step = |step: usize| move |e: Error| e.at(|site| site.step = Some(step));

    trace.reset();
    let mut obs = env.reset();
    let mut values = Vec::with_capacity(q.num_actions());
    q.action_values_into(&obs, &mut values);
    let dist = policy_distribution(&values, config.policy).map_err(at_step(0))?;
    let mut action = sample_action(&dist, rng);

    let mut result = EpisodeResult {
        total_return: 0.0,
        steps: 0,
        td_errors: Vec::new(),
        sigmas: Vec::new(),
        reached_terminal: false,
    };

    loop {
        let step = result.steps;
        let sigma = scheme.current();
        let transition = env.step(action)?;
        let reward = T::of(transition.reward);

        let (q_next, v_next, pi_next, next_action) = if transition.terminal {
            (T::zero(), T::zero(), T::zero(), action)
        } else {
            q.action_values_into(&transition.next_observation, &mut values);
            let dist = policy_distribution(&values, config.policy).map_err(at_step(step))?;
            let next = sample_action(&dist, rng);
            let v = expected_value(&dist, &values)?;
            (values[next], v, dist.prob(next), next)
        };

        let q_current = q.value(&obs, action);
        let delta = td_error(reward, config.gamma, sigma, q_next, v_next, q_current);
        scheme.observe_td_error(delta).map_err(at_step(step))?;

        q.accumulate_trace(trace, &obs, action);
        if !q.apply_trace(trace, config.alpha * delta) {
            return Err(Error::diverged().at(|s| s.step = Some(step)));
        }
        trace.decay(
            trace_decay_factor(config.gamma, config.lambda, sigma, pi_next),
            config.trace_cutoff,
        );

        result.total_return += transition.reward;
        result.td_errors.push(delta);
        result.sigmas.push(sigma);
        result.steps += 1;

        if transition.terminal || result.steps >= config.max_steps_per_episode {
            result.reached_terminal = transition.terminal;
            scheme.end_episode()?;
            return Ok(result);
        }
        obs = transition.next_observation;
        action = next_action;
    }
}

/// `v(s) = Σ_a π(a|s) Q(s, a)` for every state of a table.
pub fn state_values_from_q<T: Scalar>(q: &TabularQ<T>, policy: PolicyKind<T>) -> Result<Vec<T>> {
    (0..q.num_states())
        .map(|s| {
            let row = q.row(s);
            let dist: PolicyDistribution<T> = policy_distribution(row, policy)?;
            expected_value(&dist, row)
        })
        .collect()
}

/// Q-function, trace and σ scheme bundled for repeated episodes.
#[derive(Debug, Clone)]
pub struct QSigmaAgent<T, Q> {
    pub config: AgentConfig<T>,
    pub q: Q,
    pub trace: EligibilityTrace<T>,
    pub scheme: SigmaScheme<T>,
}

impl<T: Scalar, Q> QSigmaAgent<T, Q> {
    pub fn new<O>(config: AgentConfig<T>, q: Q, scheme: SigmaScheme<T>) -> Self
    where
        Q: ActionValueFunction<T, O>,
    {
        let trace = q.new_trace();
        Self {
            config,
            q,
            trace,
            scheme,
        }
    }

    pub fn run_episode<E, R>(&mut self, env: &mut E, rng: &mut R) -> Result<EpisodeResult<T>>
    where
        E: Environment,
        Q: ActionValueFunction<T, E::Obs>,
        R: Rng + ?Sized,
    {
        run_episode(env, &mut self.q, &mut self.trace, &mut self.scheme, &self.config, rng)
    }
}
