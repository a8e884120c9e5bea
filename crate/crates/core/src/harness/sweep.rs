//! Hyperparameter grids over (scheme, λ, α).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use super::stats::mean_stderr;
use super::{run_experiment, RunRecord, RunSpec};
use crate::sigma::SchemeKind;
use crate::{Error, Result};

/// Per-run scalar a sweep cell is ranked by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// Sum of per-episode RMS errors; lower is better.
    AucRms,
    MeanReturn,
    TotalReturn,
    FinalReturn,
}

impl Objective {
    pub fn evaluate(self, record: &RunRecord) -> Option<f64> {
        match self {
            Objective::AucRms => record.rms.as_ref().map(|r| r.iter().sum()),
            Objective::MeanReturn => Some(record.mean_return()),
            Objective::TotalReturn => Some(record.total_return()),
            Objective::FinalReturn => record.returns.last().copied(),
        }
    }

    pub fn lower_is_better(self) -> bool {
        self == Objective::AucRms
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::AucRms => "auc_rms",
            Objective::MeanReturn => "mean_return",
            Objective::TotalReturn => "total_return",
            Objective::FinalReturn => "final_return",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "auc_rms" => Ok(Objective::AucRms),
            "mean_return" => Ok(Objective::MeanReturn),
            "total_return" => Ok(Objective::TotalReturn),
            "final_return" => Ok(Objective::FinalReturn),
            other => Err(Error::Parse(format!("unknown objective `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    /// Environment, episodes, seed and other fixed settings; its scheme, λ and α are overridden.
    pub template: RunSpec,
    pub schemes: Vec<SchemeKind<f64>>,
    pub lambdas: Vec<f64>,
    pub alphas: Vec<f64>,
    pub num_runs: usize,
    pub objective: Objective,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub scheme: SchemeKind<f64>,
    pub lambda: f64,
    pub alpha: f64,
    /// Mean objective over runs; NaN when any run of the cell diverged.
    pub objective: f64,
    /// Standard error over runs; NaN with a single run or a diverged cell.
    pub stderr: f64,
}

impl SweepRow {
    pub fn diverged(&self) -> bool {
        self.objective.is_nan()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub objective: Objective,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Best non-diverged row for every scheme, in the order schemes first appear.
    pub fn best_per_scheme(&self) -> Vec<&SweepRow> {
        let mut schemes: Vec<SchemeKind<f64>> = Vec::new();
        for row in &self.rows {
            if !schemes.contains(&row.scheme) {
                schemes.push(row.scheme);
            }
        }
        let better = |a: f64, b: f64| if self.objective.lower_is_better() { a < b } else { a > b };
        schemes
            .into_iter()
            .filter_map(|scheme| {
                self.rows.iter().filter(|r| r.scheme == scheme && !r.diverged()).fold(
                    None,
                    |best: Option<&SweepRow>, r| match best {
                        Some(b) if !better(r.objective, b.objective) => Some(b),
                        _ => Some(r),
                    },
                )
            })
            .collect()
    }
}

/// Evaluates every (scheme, λ, α) cell over `num_runs` seeded runs.
///
/// Run `i` of every cell uses the same seed, so cells are compared on common
/// random numbers. A cell in which any run diverges is reported with a NaN
/// objective instead of failing the sweep; other errors propagate.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    if spec.schemes.is_empty() || spec.lambdas.is_empty() || spec.alphas.is_empty() || spec.num_runs == 0 {
        return Err(Error::InvalidParameter(
            "sweep grids and run count must be non-empty".into(),
        ));
    }
    let mut cells = Vec::new();
    for &scheme in &spec.schemes {
        for &lambda in &spec.lambdas {
            for &alpha in &spec.alphas {
                cells.push((scheme, lambda, alpha));
            }
        }
    }
    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| (0..spec.num_runs as u64).map(move |r| (c, r)))
        .collect();
    let outcomes: Vec<Option<f64>> = jobs
        .par_iter()
        .map(|&(c, run)| {
            let (scheme, lambda, alpha) = cells[c];
            let mut run_spec = spec.template.clone().with_run_index(run);
            run_spec.scheme = scheme;
            run_spec.lambda = lambda;
            run_spec.alpha = alpha;
            match run_experiment(&run_spec) {
                Ok(record) => spec
                    .objective
                    .evaluate(&record)
                    .map(Some)
                    .ok_or_else(|| Error::InvalidParameter(format!("objective {} unavailable", spec.objective))),
                Err(Error::Diverged(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(cells.len());
    for (c, &(scheme, lambda, alpha)) in cells.iter().enumerate() {
        let slice = &outcomes[c * spec.num_runs..(c + 1) * spec.num_runs];
        let values: Option<Vec<f64>> = slice.iter().copied().collect();
        let (objective, stderr) = match values {
            Some(values) => {
                let (m, se) = mean_stderr(&values);
                (m, se.unwrap_or(f64::NAN))
            }
            None => (f64::NAN, f64::NAN),
        };
        rows.push(SweepRow {
            scheme,
            lambda,
            alpha,
            objective,
            stderr,
        });
    }
    Ok(SweepTable {
        objective: spec.objective,
        rows,
    })
}
