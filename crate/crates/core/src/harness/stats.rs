//! Summary statistics over independent runs.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::agent::running_mean;
use crate::{Error, Result};

/// Root-mean-square difference between two equal-length vectors.
pub fn rms_error(estimates: &[f64], truth: &[f64]) -> Result<f64> {
    if estimates.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: estimates.len(),
            right: truth.len(),
        });
    }
    if estimates.is_empty() {
        return Ok(0.0);
    }
    let sq: f64 = estimates.iter().zip(truth).map(|(e, t)| (e - t) * (e - t)).sum();
    Ok((sq / estimates.len() as f64).sqrt())
}

/// Two-sided normal quantile for a confidence level in (0, 1).
pub fn z_score(confidence: f64) -> Result<f64> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence must lie in (0, 1), got {confidence}"
        )));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(0.5 + confidence / 2.0))
}

/// Pointwise mean, standard error and normal-quantile confidence half-width.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub mean: Vec<f64>,
    /// `None` when fewer than two runs were aggregated.
    pub stderr: Option<Vec<f64>>,
    pub half_width: Option<Vec<f64>>,
    pub n: usize,
    pub confidence: f64,
}

impl AggregateCurve {
    pub fn len(&self) -> usize {
        self.mean.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mean.is_empty()
    }

    /// `(lower, upper)` confidence bounds at index `i`, if defined.
    pub fn interval(&self, i: usize) -> Option<(f64, f64)> {
        self.half_width
            .as_ref()
            .map(|h| (self.mean[i] - h[i], self.mean[i] + h[i]))
    }
}

/// Mean and sample standard error of one sample.
///
/// Values are summed in sorted order, so the result does not depend on the
/// order in which runs were collected.
pub fn mean_stderr(values: &[f64]) -> (f64, Option<f64>) {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    if sorted.len() < 2 {
        return (mean, None);
    }
    let mut sq: Vec<f64> = sorted.iter().map(|x| (x - mean) * (x - mean)).collect();
    sq.sort_by(f64::total_cmp);
    let var = sq.iter().sum::<f64>() / (n - 1.0);
    (mean, Some((var / n).sqrt()))
}

pub fn aggregate(runs: &[Vec<f64>], confidence: f64) -> Result<AggregateCurve> {
    let Some(first) = runs.first() else {
        return Err(Error::InvalidParameter("cannot aggregate zero runs".into()));
    };
    let len = first.len();
    if let Some((index, r)) = runs.iter().enumerate().find(|(_, r)| r.len() != len) {
        return Err(Error::Ragged {
            index,
            len: r.len(),
            expected: len,
        });
    }
    let z = z_score(confidence)?;
    let n = runs.len();
    let mut mean = Vec::with_capacity(len);
    let mut stderr = Vec::with_capacity(len);
    let mut column = Vec::with_capacity(n);
    for i in 0..len {
        column.clear();
        column.extend(runs.iter().map(|r| r[i]));
        let (m, se) = mean_stderr(&column);
        mean.push(m);
        stderr.push(se.unwrap_or(f64::NAN));
    }
    let (stderr, half_width) = if n >= 2 {
        let half = stderr.iter().map(|s| z * s).collect();
        (Some(stderr), Some(half))
    } else {
        (None, None)
    };
    Ok(AggregateCurve {
        mean,
        stderr,
        half_width,
        n,
        confidence,
    })
}

/// Trailing moving average: `out[i]` is the mean of `series[i+1-window ..= i]`,
/// truncated at the start.
pub fn moving_average(series: &[f64], window: usize) -> Result<Vec<f64>> {
    if window < 1 {
        return Err(Error::InvalidParameter("window must be at least 1".into()));
    }
    Ok((0..series.len())
        .map(|i| {
            let start = (i + 1).saturating_sub(window);
            running_mean(series[start..=i].iter().copied())
        })
        .collect())
}

/// Whether two intervals are disjoint with `a` entirely below `b`.
pub fn separated_below(a: (f64, f64), b: (f64, f64)) -> bool {
    a.1 < b.0
}
