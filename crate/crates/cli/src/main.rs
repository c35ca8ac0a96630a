//! `ab-shift-lab`: batch driver for the abshift library.
//!
//! Exit codes: 0 on success, 2 on validation errors (including usage errors),
//! 3 when a computation runs out of budget or fails to converge.

mod commands;
mod config;
mod output;

use std::io::Write as _;
use std::process::ExitCode;

use abshift::Error;
use clap::{Parser, Subcommand};

use config::{RunArgs, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::VertexBudgetExceeded(_)
            | Error::NoConvergence { .. }
            | Error::BudgetExceeded(_)
            | Error::CardinalityShortfall { .. }
            | Error::TargetUnreachable(_) => CliError::Budget(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Budget(_) => 3,
            CliError::Validation(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ab-shift-lab", version, about = "Intermediate beta-shift experiments")]
struct Cli {
    #[command(flatten)]
    run: RunArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Alphabet size k and the partition intervals.
    Alphabet,
    /// Itinerary and orbit of a point.
    #[command(alias = "itinerary")]
    Orbit {
        /// Starting point in (0, 1).
        #[arg(long)]
        x: String,
        /// On a partition endpoint, retry once from x plus one quantum.
        #[arg(long)]
        nudge: bool,
    },
    /// Build the Markov diagram and export its adjacency.
    Diagram,
    /// List (or count) the admissible words of length n.
    Language {
        #[arg(long)]
        count: bool,
    },
    /// Growth-rate and spectral entropy estimates, plus block entropies of --measure.
    Entropy,
    /// Parry measure on a vertex set.
    Parry {
        /// Comma-separated vertex ids; the base vertices by default.
        #[arg(long)]
        vertices: Option<String>,
    },
    /// Ergodic Markov approximation of --measure by switching chains.
    Approx,
    /// Schedule, one generic prefix and its Birkhoff checkpoints.
    Generic {
        /// `random` (seeded), `extreme` or a fixed index.
        #[arg(long, default_value = "random")]
        selector: String,
    },
    /// Full saturation report: entropy bracket and Birkhoff checks.
    Saturate,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(cli.run)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(e.to_string()))?;
    }
    let out = match cli.command {
        Command::Alphabet => commands::alphabet(&cfg)?,
        Command::Orbit { x, nudge } => commands::orbit(&cfg, &x, nudge)?,
        Command::Diagram => commands::diagram(&cfg)?,
        Command::Language { count } => commands::language(&cfg, count)?,
        Command::Entropy => commands::entropy(&cfg)?,
        Command::Parry { vertices } => commands::parry(&cfg, vertices.as_deref())?,
        Command::Approx => commands::approx(&cfg)?,
        Command::Generic { selector } => commands::generic(&cfg, &selector)?,
        Command::Saturate => commands::saturate(&cfg)?,
    };
    let rendered = out.render(cfg.format);
    match &cfg.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(e.code())
        }
    }
}
