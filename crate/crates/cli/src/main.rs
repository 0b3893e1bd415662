//! `qst`: run state-transfer experiments from JSON configs.
//!
//! Exit codes: 0 pass or complete, 1 verification failed, 2 invalid input or
//! resource error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use commands::{execute, Completed, InvalidRun, Kind, Payload};
use output::write_atomic;

#[derive(Debug, Parser)]
#[command(
    name = "qst",
    version,
    about = "Quantum state transfer on engineered lattices and uniform rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Engineered coupling profile for {"N", "m"}
    Engineer(RunArgs),
    /// Single-particle spectrum of a chain, lattice or ring
    Spectrum(RunArgs),
    /// Spectral (spmc) or symmetry (ssmc) matching condition
    Verify(RunArgs),
    /// Mirror-transfer fidelity curve on an engineered lattice
    Mirror(RunArgs),
    /// Translation fidelity of a near-Fermi-surface packet on a ring
    Ring(RunArgs),
    /// Exact versus linearized ring evolution
    Effective(RunArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// JSON run configuration
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Output file (CSV for curves and spectra, JSON otherwise)
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Seed for random initial states; overrides the config
    #[arg(long, value_name = "INT")]
    seed: Option<u64>,
}

#[derive(Serialize)]
struct RunResult<'a> {
    #[serde(flatten)]
    payload: Payload<'a>,
    status: &'static str,
    files: Vec<String>,
    wall_time_s: f64,
}

fn read_config(path: &PathBuf) -> Result<Value, InvalidRun> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InvalidRun(format!("cannot read config {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&text)?)
}

fn run(kind: Kind, args: &RunArgs) -> Result<(Completed, f64), InvalidRun> {
    let start = Instant::now();
    let raw = read_config(&args.config)?;
    let done = execute(kind, raw, args.seed, args.out.as_deref())?;
    for artifact in &done.artifacts {
        write_atomic(&artifact.path, &artifact.contents)
            .map_err(|e| InvalidRun(format!("cannot write {}: {e}", artifact.path.display())))?;
    }
    Ok((done, start.elapsed().as_secs_f64()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Engineer(a) => (Kind::Engineer, a),
        Command::Spectrum(a) => (Kind::Spectrum, a),
        Command::Verify(a) => (Kind::Verify, a),
        Command::Mirror(a) => (Kind::Mirror, a),
        Command::Ring(a) => (Kind::Ring, a),
        Command::Effective(a) => (Kind::Effective, a),
    };
    match run(kind, args) {
        Ok((done, wall_time_s)) => {
            let status = match (kind, done.passed) {
                (Kind::Verify, true) => "pass",
                (_, false) => "fail",
                _ => "complete",
            };
            let result = RunResult {
                payload: Payload {
                    command: kind.name(),
                    version: qst_core::VERSION,
                    seed: done.seed,
                    config: &done.config,
                    outputs: &done.outputs,
                },
                status,
                files: done
                    .artifacts
                    .iter()
                    .map(|a| a.path.display().to_string())
                    .collect(),
                wall_time_s,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&result).expect("result serializes")
            );
            if done.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InvalidRun(msg)) => {
            eprintln!("qst {}: {msg}", kind.name());
            ExitCode::from(2)
        }
    }
}
