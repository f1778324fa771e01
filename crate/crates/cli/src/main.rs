//! `conelight` command-line tool.
//!
//! Every subcommand writes one JSON document to stdout. Exit codes: 0 on
//! success (or a halted detection), 1 on invalid input, 2 when detection did
//! not halt within its budget.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use conelight::detector::{run_with_ledger, SubsetLedger};
use conelight::illumination::construct_illuminating_set;
use conelight::*;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "conelight",
    version,
    about = "Cone-map eigenvector detection and illumination of the variation-norm ball"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print an optimal illuminating set for dimension n.
    IlluminateOptimal {
        #[arg(short)]
        n: usize,
        /// Include the chain bookkeeping of the construction.
        #[arg(long)]
        details: bool,
    },
    /// Check a set of directions (JSON array of arrays) against every extreme point.
    IlluminateVerify {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        directions: PathBuf,
    },
    /// Exact illumination number by set cover (n <= 6).
    IlluminateNumber {
        #[arg(short)]
        n: usize,
    },
    /// Symmetric chain decomposition of {0,1}^d.
    Chains {
        #[arg(short)]
        d: usize,
    },
    /// Pairwise lower-bound certificate for dimension n.
    Certificate {
        #[arg(short)]
        n: usize,
        /// Include every checked pair in the output.
        #[arg(long)]
        pairs: bool,
    },
    /// Run the subset-recording eigenvector detector on a map spec.
    Detect {
        #[arg(long)]
        map: PathBuf,
        #[arg(long, default_value = "log-uniform")]
        mode: SamplerMode,
        #[arg(long, default_value_t = 3.0)]
        radius: f64,
        #[arg(long, default_value_t = 1000.0)]
        beta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        /// Write the per-sample history as CSV.
        #[arg(long)]
        history_csv: Option<PathBuf>,
    },
    /// Power-iterate the normalized map from x0.
    Eigen {
        #[arg(long)]
        map: PathBuf,
        /// Comma-separated starting point; all ones by default.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        x0: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iter: usize,
    },
}

enum Outcome {
    Done(Value),
    NotHalted(Value),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(Outcome::Done(v)) => {
            emit(&v);
            ExitCode::SUCCESS
        }
        Ok(Outcome::NotHalted(v)) => {
            emit(&v);
            eprintln!("detector did not halt within the sample budget");
            ExitCode::from(2)
        }
        Err(e) => {
            emit(&error_json(&e));
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(v: &Value) {
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error worth reporting
    let _ = serde_json::to_writer_pretty(&mut out, v).and_then(|_| writeln!(out).map_err(serde_json::Error::io));
}

fn error_json(e: &anyhow::Error) -> Value {
    match e.downcast_ref::<Error>() {
        Some(core) => json!({
            "error": {
                "kind": core.kind(),
                "invariant": core.invariant(),
                "message": format!("{e:#}"),
            }
        }),
        None => json!({
            "error": {
                "kind": "input",
                "invariant": null,
                "message": format!("{e:#}"),
            }
        }),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> anyhow::Result<Value> {
    Ok(serde_json::to_value(t)?)
}

fn load_map(path: &Path) -> anyhow::Result<BuiltinMap> {
    let text = fs::read_to_string(path).with_context(|| format!("reading map spec {}", path.display()))?;
    Ok(MapSpec::from_json(&text)?.build()?)
}

fn execute(command: Command) -> anyhow::Result<Outcome> {
    let out = match command {
        Command::IlluminateOptimal { n, details } => {
            if details {
                to_value(&construct_illuminating_set(n)?)?
            } else {
                to_value(&optimal_illuminating_set(n)?)?
            }
        }
        Command::IlluminateVerify { n, directions } => {
            let text = fs::read_to_string(&directions)
                .with_context(|| format!("reading directions {}", directions.display()))?;
            let raw: Vec<Vec<f64>> =
                serde_json::from_str(&text).context("directions must be a JSON array of number arrays")?;
            let dirs = raw.into_iter().map(Direction::new).collect::<Result<Vec<_>>>()?;
            to_value(&verify_illumination(&dirs, n)?)?
        }
        Command::IlluminateNumber { n } => to_value(&illumination_number_exact(n)?)?,
        Command::Chains { d } => to_value(&symmetric_chain_decomposition(d)?.chains)?,
        Command::Certificate { n, pairs } => {
            let mut cert = to_value(&lower_bound_certificate(n)?)?;
            if !pairs {
                if let Some(obj) = cert.as_object_mut() {
                    obj.remove("pairs");
                }
            }
            cert
        }
        Command::Detect {
            map,
            mode,
            radius,
            beta,
            seed,
            max_iters,
            history_csv,
        } => {
            let f = load_map(&map)?;
            let mut cfg = match mode {
                SamplerMode::LogUniform => SamplerConfig::log_uniform(radius, seed, max_iters),
                SamplerMode::PaperLiteral => SamplerConfig::paper_literal(seed, max_iters),
                SamplerMode::Scheduled => SamplerConfig::scheduled(beta, max_iters),
            };
            cfg.seed = seed;
            let (report, ledger) = run_with_ledger(&f, &cfg)?;
            if let Some(path) = history_csv {
                write_history(&path, &ledger).with_context(|| format!("writing history to {}", path.display()))?;
            }
            let halted = report.halted;
            let v = to_value(&report)?;
            return Ok(if halted {
                Outcome::Done(v)
            } else {
                Outcome::NotHalted(v)
            });
        }
        Command::Eigen { map, x0, tol, max_iter } => {
            let f = load_map(&map)?;
            let x0 = PositiveVector::new(x0.unwrap_or_else(|| vec![1.0; f.dim()]))?;
            to_value(&estimate_eigenvector(&f, &x0, tol, max_iter)?)?
        }
    };
    Ok(Outcome::Done(out))
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";")
}

fn write_history(path: &Path, ledger: &SubsetLedger) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["sample", "point", "ratios", "recorded", "new"])?;
    for rec in ledger.history() {
        w.write_record([
            rec.sample.to_string(),
            join(rec.point.as_slice()),
            join(&rec.ratios),
            join(&rec.recorded),
            rec.new.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
