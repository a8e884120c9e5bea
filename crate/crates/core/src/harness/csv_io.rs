//! CSV emission and parsing.
//!
//! Curves: `episode,mean,stderr,ci_halfwidth`, one row per episode (1-based),
//! with empty uncertainty columns when fewer than two runs were aggregated.
//! Sweeps: `scheme,lambda,alpha,objective,stderr`. Floats use the shortest
//! representation that parses back to the same value; lines end in `\n`.

use std::io::{Read, Write};

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use super::stats::AggregateCurve;
use super::sweep::{Objective, SweepRow, SweepTable};
use crate::{Error, Result};

pub const CURVE_HEADER: [&str; 4] = ["episode", "mean", "stderr", "ci_halfwidth"];
pub const SWEEP_HEADER: [&str; 5] = ["scheme", "lambda", "alpha", "objective", "stderr"];

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(w)
}

fn float(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number `{s}`")))
}

pub fn write_curve<W: Write>(w: W, curve: &AggregateCurve) -> Result<()> {
    let mut out = writer(w);
    out.write_record(CURVE_HEADER)?;
    for i in 0..curve.len() {
        let se = curve.stderr.as_ref().map(|s| s[i].to_string()).unwrap_or_default();
        let hw = curve.half_width.as_ref().map(|h| h[i].to_string()).unwrap_or_default();
        out.write_record([(i + 1).to_string(), curve.mean[i].to_string(), se, hw])?;
    }
    out.flush()?;
    Ok(())
}

/// Parses a curve file; run count and confidence level are not stored in the
/// file and must be supplied.
pub fn read_curve<R: Read>(r: R, n: usize, confidence: f64) -> Result<AggregateCurve> {
    let mut reader = ReaderBuilder::new().from_reader(r);
    let header = reader.headers()?.clone();
    if header.iter().ne(CURVE_HEADER) {
        return Err(Error::Parse(format!("unexpected curve header {header:?}")));
    }
    let mut mean = Vec::new();
    let mut stderr = Vec::new();
    let mut half = Vec::new();
    let mut has_ci = None;
    for (row, rec) in reader.records().enumerate() {
        let rec = rec?;
        let episode: usize = rec[0]
            .parse()
            .map_err(|_| Error::Parse(format!("bad episode `{}`", &rec[0])))?;
        if episode != row + 1 {
            return Err(Error::Parse(format!("episode {episode} out of order")));
        }
        mean.push(float(&rec[1])?);
        let ci = !rec[2].is_empty();
        if *has_ci.get_or_insert(ci) != ci {
            return Err(Error::Parse("inconsistent uncertainty columns".into()));
        }
        if ci {
            stderr.push(float(&rec[2])?);
            half.push(float(&rec[3])?);
        }
    }
    let ci = has_ci.unwrap_or(n >= 2);
    Ok(AggregateCurve {
        mean,
        stderr: ci.then_some(stderr),
        half_width: ci.then_some(half),
        n,
        confidence,
    })
}

pub fn write_sweep<W: Write>(w: W, table: &SweepTable) -> Result<()> {
    let mut out = writer(w);
    out.write_record(SWEEP_HEADER)?;
    for row in &table.rows {
        out.write_record([
            row.scheme.to_string(),
            row.lambda.to_string(),
            row.alpha.to_string(),
            row.objective.to_string(),
            row.stderr.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_sweep<R: Read>(r: R, objective: Objective) -> Result<SweepTable> {
    let mut reader = ReaderBuilder::new().from_reader(r);
    let header = reader.headers()?.clone();
    if header.iter().ne(SWEEP_HEADER) {
        return Err(Error::Parse(format!("unexpected sweep header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        rows.push(SweepRow {
            scheme: rec[0].parse()?,
            lambda: float(&rec[1])?,
            alpha: float(&rec[2])?,
            objective: float(&rec[3])?,
            stderr: float(&rec[4])?,
        });
    }
    Ok(SweepTable { objective, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::stats::aggregate;
    use crate::sigma::{Aggregate, SchemeKind};
    use proptest::prelude::*;

    #[test]
    fn curve_layout() {
        let curve = aggregate(&[vec![0.0, 1.5], vec![2.0, 1.5]], 0.95).unwrap();
        let mut buf = Vec::new();
        write_curve(&mut buf, &curve).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("episode,mean,stderr,ci_halfwidth"));
        assert!(lines.next().unwrap().starts_with("1,1,1,1.95996"));
        assert_eq!(lines.next(), Some("2,1.5,0,0"));
        assert!(!text.contains('\r'));
    }

    #[test]
    fn single_run_has_empty_ci_columns() {
        let curve = aggregate(&[vec![0.25, -3.0]], 0.99).unwrap();
        let mut buf = Vec::new();
        write_curve(&mut buf, &curve).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "episode,mean,stderr,ci_halfwidth\n1,0.25,,\n2,-3,,\n"
        );
        assert_eq!(read_curve(&buf[..], 1, 0.99).unwrap(), curve);
    }

    #[test]
    fn sweep_round_trip() {
        let table = SweepTable {
            objective: Objective::TotalReturn,
            rows: vec![
                SweepRow {
                    scheme: SchemeKind::TdError(Aggregate::Max),
                    lambda: 0.6,
                    alpha: 0.8,
                    objective: -6514.43,
                    stderr: 38.78,
                },
                SweepRow {
                    scheme: SchemeKind::DynamicDecay {
                        initial: 1.0,
                        factor: 0.95,
                    },
                    lambda: 0.8,
                    alpha: 0.6,
                    objective: 1.0 / 3.0,
                    stderr: f64::NAN,
                },
            ],
        };
        let mut buf = Vec::new();
        write_sweep(&mut buf, &table).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("scheme,lambda,alpha,objective,stderr\ntderror:max,0.6,0.8,-6514.43,38.78\n"));
        let back = read_sweep(&buf[..], Objective::TotalReturn).unwrap();
        assert_eq!(back.rows[0], table.rows[0]);
        assert_eq!(back.rows[1].objective, 1.0 / 3.0);
        assert!(back.rows[1].stderr.is_nan());
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_curve("ep,mean\n1,2\n".as_bytes(), 1, 0.95).is_err());
    }

    proptest! {
        #[test]
        fn curve_round_trip_is_exact(
            runs in prop::collection::vec(prop::collection::vec(-1e6f64..1e6, 1..30), 1..6)
                .prop_filter("equal lengths", |r| r.iter().all(|s| s.len() == r[0].len())),
            confidence in prop_oneof![Just(0.7), Just(0.95), Just(0.99)],
        ) {
            let curve = aggregate(&runs, confidence).unwrap();
            let mut buf = Vec::new();
            write_curve(&mut buf, &curve).unwrap();
            prop_assert_eq!(read_curve(&buf[..], curve.n, confidence).unwrap(), curve);
        }
    }
}
