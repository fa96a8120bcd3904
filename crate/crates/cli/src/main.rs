//! `anticonc`: exact and sampled induced-edge statistics, slice-coupling
//! coefficients, 3-graph structure recognition and seeded experiments.

mod commands;
mod experiment;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anticonc_core::distribution::BUDGET_ENV;
use anticonc_core::Error;
use clap::{Parser, Subcommand};

use crate::experiment::ExperimentName;
use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "anticonc", version, about = "Anticoncentration of induced edge counts in hypergraphs")]
struct Cli {
    /// Seed for every random choice; generated and echoed when omitted.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads. Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Enumeration cap in units of work (overrides ANTICONC_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u128>,

    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Distribution of the number of edges induced by a uniform k-subset.
    Distribution {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        /// Report only Pr(X = ell).
        #[arg(long)]
        ell: Option<usize>,
        /// Fall back to this many Monte Carlo trials when exact enumeration
        /// exceeds the budget.
        #[arg(long)]
        mc: Option<u64>,
    },
    /// Coupled-polynomial coefficients of the top two degrees, the rank
    /// certificate and the auxiliary graphs for a permutation.
    Coeffs {
        graph: PathBuf,
        /// JSON file with a 1-based permutation; random from the seed if absent.
        #[arg(long)]
        sigma: Option<PathBuf>,
    },
    /// Decides whether a 3-graph is G_{A,B,M}, its complement, or not F-free.
    Classify { graph: PathBuf },
    /// Runs a named experiment from a TOML config.
    Experiment {
        name: ExperimentName,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Failures mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Config(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::Budget { .. }) => 3,
            CliError::Core(Error::Precondition(_) | Error::Degenerate(_)) => 4,
            CliError::Core(Error::Parse { .. } | Error::Invalid(_)) | CliError::Io(_) | CliError::Config(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Config(m) => f.write_str(m),
        }
    }
}

pub fn read_file(path: &std::path::Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<String, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    if let Some(budget) = cli.budget {
        std::env::set_var(BUDGET_ENV, budget.to_string());
    }
    let report = match cli.command {
        Command::Distribution { graph, k, ell, mc } => {
            commands::distribution(&graph, k, ell, mc, cli.seed.unwrap_or_else(rand::random))?
        }
        Command::Coeffs { graph, sigma } => {
            commands::coeffs(&graph, sigma.as_deref(), cli.seed.unwrap_or_else(rand::random))?
        }
        Command::Classify { graph } => commands::classify(&graph, cli.seed.unwrap_or_else(rand::random))?,
        Command::Experiment { name, config } => experiment::run(name, config.as_deref(), cli.seed)?,
    };
    Ok(report.render(cli.format))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
