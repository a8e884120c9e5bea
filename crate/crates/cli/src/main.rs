use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use qsigma::harness::config::ExperimentOptions;
use qsigma::harness::csv_io::{write_curve, write_sweep};
use qsigma::harness::figures::{figure, run_figure, PRESETS};
use qsigma::harness::{aggregate_metric, run_many, run_sweep};

#[derive(Parser)]
#[command(name = "qsigma", version, about = "Q(sigma, lambda) experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration over many seeded runs and write the aggregated curve.
    Run(Common),
    /// Evaluate a (scheme, lambda, alpha) grid and write one row per cell.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated schemes, e.g. `decay:1:0.95,tderror:max`.
        #[arg(long)]
        schemes: Option<String>,
        #[arg(long)]
        lambdas: Option<String>,
        #[arg(long)]
        alphas: Option<String>,
        /// auc_rms, mean_return, total_return or final_return.
        #[arg(long)]
        objective: Option<String>,
    },
    /// Run a canned preset and write its CSV files into `--out` (default `out/`).
    Figure {
        /// Preset name; `list` prints the available presets.
        id: String,
        #[arg(long)]
        runs: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    /// Flat key=value file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// randomwalk19, windy, swg, movinggoal, mountaincar or cartpole.
    #[arg(long)]
    env: Option<String>,
    /// constant:S, decay:INIT:FACTOR, tderror:max|mean or combined:FACTOR.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    epsilon: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    episodes: Option<String>,
    #[arg(long)]
    runs: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    confidence: Option<String>,
    #[arg(long)]
    smooth_window: Option<String>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<String>,
    /// return, steps, rms or sigma.
    #[arg(long)]
    metric: Option<String>,
    #[arg(long)]
    max_steps: Option<String>,
}

impl Common {
    fn options(&self, extra: &[(&str, &Option<String>)]) -> Result<ExperimentOptions> {
        let base = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                ExperimentOptions::parse_file_contents(&text).with_context(|| format!("in {}", path.display()))?
            }
            None => ExperimentOptions::default(),
        };
        let mut flags = ExperimentOptions::default();
        let pairs = [
            ("env", &self.env),
            ("scheme", &self.scheme),
            ("lambda", &self.lambda),
            ("alpha", &self.alpha),
            ("epsilon", &self.epsilon),
            ("gamma", &self.gamma),
            ("episodes", &self.episodes),
            ("runs", &self.runs),
            ("seed", &self.seed),
            ("confidence", &self.confidence),
            ("smooth-window", &self.smooth_window),
            ("out", &self.out),
            ("metric", &self.metric),
            ("max-steps", &self.max_steps),
        ];
        for (key, value) in pairs.iter().chain(extra) {
            if let Some(v) = value {
                flags.set(key, v).with_context(|| format!("--{key}"))?;
            }
        }
        Ok(base.overlay(flags))
    }
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)?;
            }
            Box::new(BufWriter::new(
                File::create(p).with_context(|| format!("creating {}", p.display()))?,
            ))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run(common) => {
            let opts = common.options(&[])?;
            let spec = opts.run_spec()?;
            let records = run_many(&spec, opts.runs())?;
            let curve = aggregate_metric(&records, opts.metric()?, opts.confidence(), opts.smooth_window())?;
            write_curve(output(&opts.out)?, &curve)?;
            let capped: usize = records.iter().map(|r| r.capped_episodes).sum();
            if capped > 0 {
                eprintln!("note: {capped} episode(s) hit the step cap");
            }
        }
        Command::Sweep {
            common,
            schemes,
            lambdas,
            alphas,
            objective,
        } => {
            let opts = common.options(&[
                ("schemes", &schemes),
                ("lambdas", &lambdas),
                ("alphas", &alphas),
                ("objective", &objective),
            ])?;
            let table = run_sweep(&opts.sweep_spec()?)?;
            write_sweep(output(&opts.out)?, &table)?;
            for row in table.best_per_scheme() {
                eprintln!(
                    "best {}: lambda={} alpha={} {}={}",
                    row.scheme, row.lambda, row.alpha, table.objective, row.objective
                );
            }
        }
        Command::Figure { id, runs, seed, out } => {
            if id == "list" {
                for name in PRESETS {
                    println!("{name}");
                }
                return Ok(());
            }
            if !PRESETS.contains(&id.as_str()) {
                bail!("unknown figure `{id}`; expected one of {}", PRESETS.join(", "));
            }
            let fig = figure(&id, runs, seed)?;
            let dir = out.unwrap_or_else(|| PathBuf::from("out"));
            for path in run_figure(&fig, &dir)? {
                println!("{}", path.display());
            }
        }
    }
    Ok(())
}
