//! Canned experiment presets.
//!
//! Each preset is addressed by a short name (see [`PRESETS`]) and writes its
//! CSV files into an output directory. Run counts default to the full-scale
//! values and can be overridden.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use csv::{Terminator, WriterBuilder};

use super::csv_io::{write_curve, write_sweep};
use super::stats::mean_stderr;
use super::{aggregate_metric, run_many, run_sweep, Metric, Objective, RunSpec, SweepSpec};
use crate::envs::EnvId;
use crate::sigma::{Aggregate, SchemeKind};
use crate::{Error, Result};

pub const PRESETS: [&str; 10] = [
    "rw-schemes",
    "rw-combined",
    "swg-decay",
    "swg-sweep",
    "swg-curves",
    "moving-goal",
    "mountaincar",
    "cartpole",
    "cartpole-early",
    "cartpole-sigma",
];

const TD: SchemeKind<f64> = SchemeKind::TdError(Aggregate::Max);

fn decay(factor: f64) -> SchemeKind<f64> {
    SchemeKind::DynamicDecay { initial: 1.0, factor }
}

fn grid(values: &[f64]) -> Vec<f64> {
    values.to_vec()
}

const STEP_SIZES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
const LAMBDAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    pub spec: RunSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FigureKind {
    Curves {
        curves: Vec<Curve>,
        metric: Metric,
        confidence: f64,
        smooth_window: usize,
    },
    Sweep(SweepSpec),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Figure {
    pub name: &'static str,
    pub num_runs: usize,
    pub kind: FigureKind,
}

fn curves(env: EnvId, episodes: usize, items: &[(&str, SchemeKind<f64>, f64, f64)], seed: u64) -> Vec<Curve> {
    items
        .iter()
        .map(|&(label, scheme, lambda, alpha)| Curve {
            label: label.to_string(),
            spec: RunSpec::new(env, scheme, alpha, lambda, episodes).with_seed(seed),
        })
        .collect()
}

fn sweep(
    env: EnvId,
    episodes: usize,
    schemes: Vec<SchemeKind<f64>>,
    lambdas: Vec<f64>,
    runs: usize,
    seed: u64,
) -> SweepSpec {
    SweepSpec {
        template: RunSpec::new(env, TD, 0.5, 0.7, episodes).with_seed(seed),
        schemes,
        lambdas,
        alphas: grid(&STEP_SIZES),
        num_runs: runs,
        objective: Objective::MeanReturn,
    }
}

/// Builds a preset; `runs` replaces its default run count.
pub fn figure(name: &str, runs: Option<usize>, seed: u64) -> Result<Figure> {
    use EnvId::*;
    let (name, default_runs) = match PRESETS.iter().find(|&&p| p == name) {
        Some(&p) => (
            p,
            match p {
                "rw-schemes" | "swg-decay" | "swg-sweep" | "swg-curves" | "moving-goal" => 1000,
                "rw-combined" | "cartpole-early" => 10_000,
                "mountaincar" => 500,
                "cartpole" => 100,
                _ => 1,
            },
        ),
        None => {
            return Err(Error::InvalidParameter(format!(
                "unknown figure `{name}`; expected one of {}",
                PRESETS.join(", ")
            )))
        }
    };
    let n = runs.unwrap_or(default_runs);
    if n == 0 {
        return Err(Error::InvalidParameter("run count must be positive".into()));
    }
    let rw = [("dynamic_decay", decay(0.95), 0.7, 0.9), ("td_error", TD, 0.7, 0.8)];
    let cp = [("dynamic_decay", decay(0.95), 0.7, 0.5), ("td_error", TD, 0.7, 0.5)];
    let curve_fig = |curves, metric, confidence, smooth_window| FigureKind::Curves {
        curves,
        metric,
        confidence,
        smooth_window,
    };
    let kind = match name {
        "rw-schemes" => curve_fig(curves(RandomWalk19, 50, &rw, seed), Metric::Rms, 0.99, 1),
        "rw-combined" => {
            let mut items = rw.to_vec();
            items.push(("combined", SchemeKind::Combined { factor: 0.95 }, 0.7, 0.8));
            curve_fig(curves(RandomWalk19, 50, &items, seed), Metric::Rms, 0.99, 1)
        }
        "swg-decay" => FigureKind::Sweep(sweep(
            StochasticWindy,
            100,
            [0.99, 0.95, 0.8, 0.5, 0.2].into_iter().map(decay).collect(),
            vec![0.7],
            n,
            seed,
        )),
        "swg-sweep" => FigureKind::Sweep(sweep(
            StochasticWindy,
            100,
            vec![decay(0.99), TD],
            grid(&LAMBDAS),
            n,
            seed,
        )),
        "swg-curves" => curve_fig(
            curves(
                StochasticWindy,
                100,
                &[("dynamic_decay", decay(0.99), 0.7, 0.5), ("td_error", TD, 0.7, 0.5)],
                seed,
            ),
            Metric::Return,
            0.99,
            1,
        ),
        "moving-goal" => curve_fig(
            curves(
                MovingGoal,
                100,
                &[("dynamic_decay", decay(0.95), 0.8, 0.6), ("td_error", TD, 0.6, 0.8)],
                seed,
            ),
            Metric::Return,
            0.99,
            1,
        ),
        "mountaincar" => curve_fig(
            curves(
                MountainCar,
                300,
                &[("dynamic_decay", decay(0.95), 0.1, 0.5), ("td_error", TD, 0.1, 0.5)],
                seed,
            ),
            Metric::Return,
            0.95,
            1,
        ),
        "cartpole" => curve_fig(curves(CartPole, 200, &cp, seed), Metric::Return, 0.70, 30),
        "cartpole-early" => curve_fig(curves(CartPole, 50, &cp, seed), Metric::Return, 0.99, 1),
        "cartpole-sigma" => curve_fig(curves(CartPole, 50, &cp, seed), Metric::Sigma, 0.99, 1),
        _ => unreachable!(),
    };
    Ok(Figure {
        name,
        num_runs: n,
        kind,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

/// Runs a preset and writes its files into `out_dir`, returning their paths.
///
/// Curve presets write `<name>_<label>.csv` per curve plus
/// `<name>_totals.csv` (`label,total,stderr`: the per-run sum of the metric).
/// Sweep presets write `<name>.csv`.
pub fn run_figure(fig: &Figure, out_dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    match &fig.kind {
        FigureKind::Sweep(spec) => {
            let table = run_sweep(spec)?;
            let path = out_dir.join(format!("{}.csv", fig.name));
            write_sweep(create(&path)?, &table)?;
            written.push(path);
        }
        FigureKind::Curves {
            curves,
            metric,
            confidence,
            smooth_window,
        } => {
            let totals_path = out_dir.join(format!("{}_totals.csv", fig.name));
            let mut totals = WriterBuilder::new()
                .terminator(Terminator::Any(b'\n'))
                .from_writer(create(&totals_path)?);
            totals.write_record(["label", "total", "stderr"])?;
            for curve in curves {
                let records = run_many(&curve.spec, fig.num_runs)?;
                let agg = aggregate_metric(&records, *metric, *confidence, *smooth_window)?;
                let path = out_dir.join(format!("{}_{}.csv", fig.name, curve.label));
                write_curve(create(&path)?, &agg)?;
                written.push(path);
                let sums = records
                    .iter()
                    .map(|r| r.series(*metric).map(|s| s.iter().sum::<f64>()))
                    .collect::<Option<Vec<f64>>>()
                    .ok_or_else(|| Error::InvalidParameter(format!("metric `{metric}` is not recorded")))?;
                let (mean, se) = mean_stderr(&sums);
                totals.write_record([
                    curve.label.clone(),
                    mean.to_string(),
                    se.map(|s| s.to_string()).unwrap_or_default(),
                ])?;
            }
            totals.flush()?;
            written.push(totals_path);
        }
    }
    Ok(written)
}
