//! `polypart`: instance generation, partitions, incidence audits, spanning
//! trees with low crossing number and experiment suites.

mod commands;
mod experiment;
mod gen;
mod params;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "polypart", version, about = "Polynomial partitioning experiments")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate an instance file.
    Gen(GenArgs),
    /// Build an r-partitioning polynomial for an instance's points.
    Partition(PartitionArgs),
    /// Count incidences of an instance with lines or curves.
    Incidences(IncidencesArgs),
    /// Build a spanning tree with low crossing number.
    Tree(TreeArgs),
    /// Compute the crossing number of a tree file.
    Crossings(CrossingsArgs),
    /// Check the incidence or partition bounds on an instance.
    Audit(AuditArgs),
    /// Run an experiment suite and write one CSV row per (size, seed).
    Experiment(ExperimentArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    /// grid, random, circle, extremal-grid, random-lines or conic.
    pub kind: String,
    /// `key=value` parameters, or `AxB` for grids.
    pub params: Vec<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub r: String,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct IncidencesArgs {
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct TreeArgs {
    pub input: PathBuf,
    #[arg(long, default_value_t = 16)]
    pub c: usize,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    /// SVG figure of the points and tree edges.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct CrossingsArgs {
    /// A tree file written by `polypart tree`.
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// SVG figure with the witness hyperplane.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    pub input: PathBuf,
    /// Partition parameter; required for point-only instances.
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    /// Random lines checked against a point-only partition.
    #[arg(long, default_value_t = 200)]
    pub lines: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    /// st, curves, tree2d or tree3d.
    pub suite: String,
    /// `sizes=..`, `seeds=..`, `kind=..` or `c=..`, as an alternative to the flags.
    pub params: Vec<String>,
    /// Comma-separated size ladder.
    #[arg(long)]
    pub sizes: Option<String>,
    /// Number of seeds per size.
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub c: Option<usize>,
    #[arg(long)]
    pub r: Option<String>,
    #[arg(long, default_value = "1/20")]
    pub eps: String,
    /// Crossing mode; exact for small trees and sampled otherwise when absent.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    #[arg(long, default_value_t = 20_000)]
    pub samples: usize,
    /// Directory for one SVG per tree row.
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Add a runtime_ms column.
    #[arg(long)]
    pub timing: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Sampled,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failed { check: String, message: String },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn failed(check: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Failed {
            check: check.into(),
            message: message.into(),
        }
    }

    /// Bad parameters and unreadable input are usage errors; everything
    /// else is a computation failure.
    pub fn from_core(check: &str, e: polypart::Error) -> Self {
        use polypart::Error as E;
        match e {
            E::InvalidParameter(_) | E::Parse(_) | E::Json(_) | E::Io(_) => CliError::Usage(e.to_string()),
            other => CliError::failed(check, other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Gen(a) => gen::run(&a),
        Command::Partition(a) => commands::partition(&a),
        Command::Incidences(a) => commands::incidences(&a),
        Command::Tree(a) => commands::tree(&a),
        Command::Crossings(a) => commands::crossings(&a),
        Command::Audit(a) => commands::audit(&a),
        Command::Experiment(a) => experiment::run(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Failed { check, message }) => {
            eprintln!("failed check: {check}");
            eprintln!("{message}");
            ExitCode::from(2)
        }
    }
}
