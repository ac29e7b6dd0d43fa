//! `thermomagic` command-line interface.
//!
//! Exit codes: 0 success, 2 invalid input or unwritable output, 3 failed
//! `--verify` cross-check. `THERMOMAGIC_THREADS` caps the worker pool.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{merged, Cli, Command};

#[derive(Debug)]
pub enum Fail {
    Input(String),
    Verify(String),
}

impl From<thermomagic::Error> for Fail {
    fn from(e: thermomagic::Error) -> Self {
        Fail::Input(e.to_string())
    }
}

fn init_threads() -> Result<(), Fail> {
    let Ok(raw) = std::env::var("THERMOMAGIC_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Fail::Input(format!("THERMOMAGIC_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Fail::Input(format!("cannot size thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), Fail> {
    init_threads()?;
    match cli.command {
        Command::Witness { common } => {
            let (common, _) = merged(common, args::NoOpts::default())?;
            commands::witness(common)
        }
        Command::CriticalBeta { common, opts } => {
            let (common, opts) = merged(common, opts)?;
            commands::critical_beta(common, opts)
        }
        Command::CriticalCoherence { common, opts } => {
            let (common, opts) = merged(common, opts)?;
            commands::critical_coherence(common, opts)
        }
        Command::ConeMesh { common, opts } => {
            let (common, opts) = merged(common, opts)?;
            commands::cone_mesh_cmd(common, opts)
        }
        Command::MagicVolume { common, opts } => {
            let (common, opts) = merged(common, opts)?;
            commands::magic_volume(common, opts)
        }
        Command::DistillMap { common, opts } => {
            let (common, opts) = merged(common, opts)?;
            commands::distill_map(common, opts)
        }
        Command::OptimalH { common, opts } => {
            let (common, opts) = merged(common, opts)?;
            commands::optimal_h(common, opts)
        }
        Command::Catalytic { common, opts } => {
            let (common, opts) = merged(common, opts)?;
            commands::catalytic_cmd(common, opts)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Fail::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
