#![allow(dead_code)]

use qsigma::envs::{Environment, Transition};
use qsigma::rng::{env_rng, StreamRng};
use qsigma::Result;
use rand::Rng;

/// Three non-terminal states in a row. Action 1 moves right, action 0 left
/// (staying put at the left wall); with probability 0.2 the move is reversed.
/// Leaving state 2 to the right terminates with reward +2, every other step
/// costs -0.5.
pub struct Chain {
    pos: usize,
    rng: StreamRng,
}

impl Chain {
    pub const STATES: usize = 3;

    pub fn new(seed: u64) -> Self {
        Self {
            pos: 0,
            rng: env_rng(seed),
        }
    }
}

impl Environment for Chain {
    type Obs = usize;

    fn num_actions(&self) -> usize {
        2
    }

    fn reset(&mut self) -> usize {
        self.pos = 0;
        0
    }

    fn step(&mut self, action: usize) -> Result<Transition<usize>> {
        let slip = self.rng.random::<f64>() < 0.2;
        let right = (action == 1) != slip;
        if right && self.pos == 2 {
            return Ok(Transition {
                next_observation: 3,
                reward: 2.0,
                terminal: true,
            });
        }
        self.pos = if right {
            self.pos + 1
        } else {
            self.pos.saturating_sub(1)
        };
        Ok(Transition {
            next_observation: self.pos,
            reward: -0.5,
            terminal: false,
        })
    }
}

/// Behaviour used by the reference learners.
#[derive(Clone, Copy)]
pub enum Behaviour {
    Uniform,
    Greedy(f64),
}

pub fn probabilities(q: &[f64], behaviour: Behaviour) -> Vec<f64> {
    let n = q.len();
    match behaviour {
        Behaviour::Uniform => vec![1.0 / n as f64; n],
        Behaviour::Greedy(eps) => {
            let best = q.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let ties = q.iter().filter(|&&v| v == best).count();
            q.iter()
                .map(|&v| {
                    let base = eps / n as f64;
                    if v == best {
                        base + (1.0 - eps) / ties as f64
                    } else {
                        base
                    }
                })
                .collect()
        }
    }
}

pub fn draw(p: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    p.iter().rposition(|&x| x > 0.0).unwrap()
}

fn expectation(p: &[f64], q: &[f64]) -> f64 {
    let mut v = 0.0;
    for i in 0..p.len() {
        v += p[i] * q[i];
    }
    v
}

/// Trajectory of a reference learner: every TD error in order, and the full
/// table at the end of each episode.
#[derive(Debug, Default)]
pub struct Trace {
    pub deltas: Vec<Vec<f64>>,
    pub tables: Vec<Vec<f64>>,
}

pub struct Params {
    pub alpha: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub behaviour: Behaviour,
    pub episodes: usize,
}

/// Tabular Sarsa(λ) with accumulating traces and a dense trace table.
pub fn sarsa_lambda<E>(env: &mut E, states: usize, p: &Params, rng: &mut impl Rng) -> Trace
where
    E: Environment<Obs = usize>,
{
    let na = env.num_actions();
    let mut q = vec![0.0; states * na];
    let mut out = Trace::default();
    for _ in 0..p.episodes {
        let mut e = vec![0.0; states * na];
        let mut s = env.reset();
        let mut a = draw(&probabilities(&q[s * na..(s + 1) * na], p.behaviour), rng);
        let mut deltas = Vec::new();
        loop {
            let t = env.step(a).unwrap();
            let (target, next_a) = if t.terminal {
                (t.reward, 0)
            } else {
                let s2 = t.next_observation;
                let a2 = draw(&probabilities(&q[s2 * na..(s2 + 1) * na], p.behaviour), rng);
                (t.reward + p.gamma * q[s2 * na + a2], a2)
            };
            let delta = target - q[s * na + a];
            deltas.push(delta);
            e[s * na + a] += 1.0;
            let step = p.alpha * delta;
            for i in 0..q.len() {
                q[i] += step * e[i];
                e[i] *= p.gamma * p.lambda;
            }
            if t.terminal {
                break;
            }
            s = t.next_observation;
            a = next_a;
        }
        out.deltas.push(deltas);
        out.tables.push(q.clone());
    }
    out
}

/// Tabular tree-backup(λ): the expected target with traces decayed by γλπ(A'|S').
pub fn tree_backup_lambda<E>(env: &mut E, states: usize, p: &Params, rng: &mut impl Rng) -> Trace
where
    E: Environment<Obs = usize>,
{
    let na = env.num_actions();
    let mut q = vec![0.0; states * na];
    let mut out = Trace::default();
    for _ in 0..p.episodes {
        let mut e = vec![0.0; states * na];
        let mut s = env.reset();
        let mut a = draw(&probabilities(&q[s * na..(s + 1) * na], p.behaviour), rng);
        let mut deltas = Vec::new();
        loop {
            let t = env.step(a).unwrap();
            let (target, next_a, pi_next) = if t.terminal {
                (t.reward, 0, 0.0)
            } else {
                let row = &q[t.next_observation * na..(t.next_observation + 1) * na];
                let pi = probabilities(row, p.behaviour);
                let a2 = draw(&pi, rng);
                (t.reward + p.gamma * expectation(&pi, row), a2, pi[a2])
            };
            let delta = target - q[s * na + a];
            deltas.push(delta);
            e[s * na + a] += 1.0;
            let step = p.alpha * delta;
            let decay = p.gamma * p.lambda * pi_next;
            for i in 0..q.len() {
                q[i] += step * e[i];
                e[i] *= decay;
            }
            if t.terminal {
                break;
            }
            s = t.next_observation;
            a = next_a;
        }
        out.deltas.push(deltas);
        out.tables.push(q.clone());
    }
    out
}

/// One-step tabular Q(σ) with a fixed σ: σ = 1 is Sarsa, σ = 0 Expected Sarsa.
pub fn one_step_q_sigma<E>(env: &mut E, states: usize, sigma: f64, p: &Params, rng: &mut impl Rng) -> Trace
where
    E: Environment<Obs = usize>,
{
    let na = env.num_actions();
    let mut q = vec![0.0; states * na];
    let mut out = Trace::default();
    for _ in 0..p.episodes {
        let mut s = env.reset();
        let mut a = draw(&probabilities(&q[s * na..(s + 1) * na], p.behaviour), rng);
        let mut deltas = Vec::new();
        loop {
            let t = env.step(a).unwrap();
            let mut next_a = 0;
            let mut backup = 0.0;
            if !t.terminal {
                let s2 = t.next_observation;
                let row = &q[s2 * na..(s2 + 1) * na];
                let pi = probabilities(row, p.behaviour);
                next_a = draw(&pi, rng);
                backup = sigma * row[next_a] + (1.0 - sigma) * expectation(&pi, row);
            }
            let delta = t.reward + p.gamma * backup - q[s * na + a];
            deltas.push(delta);
            q[s * na + a] += p.alpha * delta;
            if t.terminal {
                break;
            }
            s = t.next_observation;
            a = next_a;
        }
        out.deltas.push(deltas);
        out.tables.push(q.clone());
    }
    out
}

/// One-step Expected Sarsa written directly from its update rule.
pub fn expected_sarsa<E>(env: &mut E, states: usize, p: &Params, rng: &mut impl Rng) -> Trace
where
    E: Environment<Obs = usize>,
{
    let na = env.num_actions();
    let mut q = vec![0.0; states * na];
    let mut out = Trace::default();
    for _ in 0..p.episodes {
        let mut s = env.reset();
        let mut a = draw(&probabilities(&q[s * na..(s + 1) * na], p.behaviour), rng);
        let mut deltas = Vec::new();
        loop {
            let t = env.step(a).unwrap();
            // The next action is drawn before the update, as the learner under
            // test does; the backup itself never looks at it.
            let (delta, next_a) = if t.terminal {
                (t.reward - q[s * na + a], 0)
            } else {
                let row = &q[t.next_observation * na..(t.next_observation + 1) * na];
                let pi = probabilities(row, p.behaviour);
                let next_a = draw(&pi, rng);
                (t.reward + p.gamma * expectation(&pi, row) - q[s * na + a], next_a)
            };
            deltas.push(delta);
            q[s * na + a] += p.alpha * delta;
            if t.terminal {
                break;
            }
            s = t.next_observation;
            a = next_a;
        }
        out.deltas.push(deltas);
        out.tables.push(q.clone());
    }
    out
}

/// The library learner on the same environment, recorded in the same shape.
pub fn library_learner<E>(
    env: &mut E,
    states: usize,
    scheme: qsigma::SigmaScheme,
    p: &Params,
    rng: &mut impl Rng,
) -> Trace
where
    E: Environment<Obs = usize>,
{
    use qsigma::agent::{run_episode, ActionValueFunction};
    use qsigma::policy::PolicyKind;

    let policy = match p.behaviour {
        Behaviour::Uniform => PolicyKind::Equiprobable,
        Behaviour::Greedy(eps) => PolicyKind::EpsilonGreedy(eps),
    };
    let config = qsigma::AgentConfig::new(p.alpha, p.gamma, p.lambda, policy).unwrap();
    let mut q = qsigma::TabularQ::new(states, env.num_actions()).unwrap();
    let mut trace = ActionValueFunction::<f64, usize>::new_trace(&q);
    let mut scheme = scheme;
    let mut out = Trace::default();
    for _ in 0..p.episodes {
        let result = run_episode(env, &mut q, &mut trace, &mut scheme, &config, rng).unwrap();
        assert!(result.reached_terminal);
        out.deltas.push(result.td_errors);
        out.tables.push(q.as_slice().to_vec());
    }
    out
}

/// Bitwise comparison, reporting the first differing step.
pub fn assert_identical(ours: &Trace, reference: &Trace) -> std::result::Result<(), String> {
    if ours.deltas.len() != reference.deltas.len() {
        return Err(format!(
            "episode counts {} vs {}",
            ours.deltas.len(),
            reference.deltas.len()
        ));
    }
    for (ep, (a, b)) in ours.deltas.iter().zip(&reference.deltas).enumerate() {
        if a.len() != b.len() {
            return Err(format!("episode {ep}: {} steps vs {}", a.len(), b.len()));
        }
        if let Some(t) = (0..a.len()).find(|&t| a[t].to_bits() != b[t].to_bits()) {
            return Err(format!("episode {ep} step {t}: delta {} vs {}", a[t], b[t]));
        }
        let (qa, qb) = (&ours.tables[ep], &reference.tables[ep]);
        if let Some(i) = (0..qa.len()).find(|&i| qa[i].to_bits() != qb[i].to_bits()) {
            return Err(format!("episode {ep}: Q[{i}] {} vs {}", qa[i], qb[i]));
        }
    }
    Ok(())
}
