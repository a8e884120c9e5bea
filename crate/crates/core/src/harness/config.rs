//! Flat `key=value` experiment configuration.
//!
//! Keys mirror the command-line flags (`env`, `scheme`, `lambda`, `alpha`,
//! `epsilon`, `gamma`, `episodes`, `runs`, `seed`, `confidence`,
//! `smooth-window`, `out`, `metric`, `max-steps`) plus the sweep grids
//! (`schemes`, `lambdas`, `alphas` as comma-separated lists, and `objective`).
//! Blank lines and `#` comments are ignored.

use std::path::PathBuf;
use std::str::FromStr;

use super::{Metric, Objective, RunSpec, SweepSpec};
use crate::envs::EnvId;
use crate::policy::PolicyKind;
use crate::sigma::{Aggregate, SchemeKind};
use crate::{Error, Result};

pub const DEFAULT_EPISODES: usize = 100;
pub const DEFAULT_RUNS: usize = 100;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExperimentOptions {
    pub env: Option<EnvId>,
    pub scheme: Option<SchemeKind<f64>>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub episodes: Option<usize>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub confidence: Option<f64>,
    pub smooth_window: Option<usize>,
    pub out: Option<PathBuf>,
    pub metric: Option<Metric>,
    pub max_steps: Option<usize>,
    pub schemes: Option<Vec<SchemeKind<f64>>>,
    pub lambdas: Option<Vec<f64>>,
    pub alphas: Option<Vec<f64>>,
    pub objective: Option<Objective>,
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad value `{value}` for `{key}`")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse(key, s))
        .collect()
}

impl ExperimentOptions {
    pub fn parse_file_contents(text: &str) -> Result<Self> {
        let mut opts = Self::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key=value", lineno + 1)))?;
            opts.set(key.trim(), value.trim())
                .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(opts)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key_norm = key.replace('_', "-");
        match key_norm.as_str() {
            "env" => self.env = Some(value.parse()?),
            "scheme" => self.scheme = Some(value.parse()?),
            "lambda" => self.lambda = Some(parse(key, value)?),
            "alpha" => self.alpha = Some(parse(key, value)?),
            "epsilon" => self.epsilon = Some(parse(key, value)?),
            "gamma" => self.gamma = Some(parse(key, value)?),
            "episodes" => self.episodes = Some(parse(key, value)?),
            "runs" => self.runs = Some(parse(key, value)?),
            "seed" => self.seed = Some(parse(key, value)?),
            "confidence" => self.confidence = Some(parse(key, value)?),
            "smooth-window" => self.smooth_window = Some(parse(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "metric" => self.metric = Some(value.parse()?),
            "max-steps" => self.max_steps = Some(parse(key, value)?),
            "schemes" => self.schemes = Some(value.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?),
            "lambdas" => self.lambdas = Some(parse_list(key, value)?),
            "alphas" => self.alphas = Some(parse_list(key, value)?),
            "objective" => self.objective = Some(value.parse()?),
            _ => return Err(Error::Parse(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: ExperimentOptions) -> ExperimentOptions {
        macro_rules! pick {
            ($($f:ident),*) => { ExperimentOptions { $($f: over.$f.or(self.$f)),* } };
        }
        pick!(
            env,
            scheme,
            lambda,
            alpha,
            epsilon,
            gamma,
            episodes,
            runs,
            seed,
            confidence,
            smooth_window,
            out,
            metric,
            max_steps,
            schemes,
            lambdas,
            alphas,
            objective
        )
    }

    pub fn env(&self) -> Result<EnvId> {
        self.env
            .ok_or_else(|| Error::InvalidParameter("no environment given (use --env or env=...)".into()))
    }

    pub fn runs(&self) -> usize {
        self.runs.unwrap_or(DEFAULT_RUNS)
    }

    pub fn confidence(&self) -> f64 {
        self.confidence.unwrap_or(DEFAULT_CONFIDENCE)
    }

    pub fn smooth_window(&self) -> usize {
        self.smooth_window.unwrap_or(1)
    }

    pub fn metric(&self) -> Result<Metric> {
        Ok(self.metric.unwrap_or(Metric::default_for(self.env()?)))
    }

    /// Run template (run index 0) with unset fields taken from the environment defaults.
    pub fn run_spec(&self) -> Result<RunSpec> {
        let env = self.env()?;
        let mut spec = RunSpec::new(
            env,
            self.scheme.unwrap_or(SchemeKind::TdError(Aggregate::Max)),
            self.alpha.unwrap_or(0.5),
            self.lambda.unwrap_or(0.7),
            self.episodes.unwrap_or(DEFAULT_EPISODES),
        )
        .with_seed(self.seed.unwrap_or(0));
        if let Some(g) = self.gamma {
            spec.gamma = g;
        }
        if let Some(eps) = self.epsilon {
            spec.policy = PolicyKind::epsilon_greedy(eps)?;
        }
        if let Some(m) = self.max_steps {
            spec.max_steps_per_episode = m;
        }
        spec.agent_config(1)?;
        Ok(spec)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let template = self.run_spec()?;
        let objective = self.objective.unwrap_or(if template.env == EnvId::RandomWalk19 {
            Objective::AucRms
        } else {
            Objective::MeanReturn
        });
        Ok(SweepSpec {
            schemes: self.schemes.clone().unwrap_or_else(|| vec![template.scheme]),
            lambdas: self.lambdas.clone().unwrap_or_else(|| vec![template.lambda]),
            alphas: self.alphas.clone().unwrap_or_else(|| vec![template.alpha]),
            num_runs: self.runs(),
            objective,
            template,
        })
    }
}
