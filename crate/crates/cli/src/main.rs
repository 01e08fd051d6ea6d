//! Command-line front end: train checkpoints, certify them, inspect them.

mod commands;
mod error;
mod game_args;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{BoundArgs, EvalArgs, InspectArgs, TrainArgs};
use crate::error::{CliError, Code};

#[derive(Parser, Debug)]
#[command(name = "tisp", version, about = "Temporal-induced self-play for one-sided stochastic Bayesian games")]
struct Cli {
    /// Worker threads; overrides the TISP_THREADS environment variable.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Train a checkpoint by backward induction over belief grids.
    Train(TrainArgs),
    /// Certify a checkpoint: exact epsilon or induced-game exploitability.
    Eval(EvalArgs),
    /// Print policies and values at a round, belief and state.
    Inspect(InspectArgs),
    /// Evaluate the theoretical epsilon bound.
    Bound(BoundArgs),
}

fn configure_threads(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var("TISP_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| {
                CliError::new(Code::ConfigInvalid, format!("TISP_THREADS = {v:?} is not a thread count"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(CliError::new(Code::ConfigInvalid, "thread count must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::new(Code::ConfigInvalid, e.to_string()))?;
    }
    Ok(n)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let threads = configure_threads(cli.threads)?;
    let argv: Vec<String> = std::env::args().collect();
    match cli.command {
        Command::Train(a) => commands::run_train(&a, &argv, threads),
        Command::Eval(a) => commands::run_eval(&a, &argv, threads),
        Command::Inspect(a) => commands::run_inspect(&a),
        Command::Bound(a) => commands::run_bound(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.exit(),
    }
}
