//! Command-line front end: classification, moment maps, slices, curvature verification,
//! eigenfunction checks and pullback runs, with JSON or CSV reports.

mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Outcome;
use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed or out-of-domain input.
    #[error("{0}")]
    Input(String),
    /// The requested quotient is empty or degenerate.
    #[error("{0}")]
    Empty(String),
    /// Numerical failure during the run.
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Runtime(_) => 1,
            Self::Input(_) => 2,
            Self::Empty(_) => 3,
        }
    }
}

impl From<qkq::Error> for CliError {
    fn from(e: qkq::Error) -> Self {
        use qkq::Error as E;
        let msg = e.to_string();
        match e {
            E::Dimension(_)
            | E::ChartDomain(_)
            | E::Contract(_)
            | E::Domain(_)
            | E::Parameter(_) => Self::Input(msg),
            E::Degenerate(_) | E::SearchFailure { .. } => Self::Empty(msg),
            _ => Self::Runtime(msg),
        }
    }
}

#[derive(Parser)]
#[command(name = "qkq", version, about = "Quaternion Kähler quotient toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify an sp(1,2) generator and report its Bryant case
    Classify(RunConfig),
    /// Evaluate a moment map at a point, or sample its zero set
    Moment(RunConfig),
    /// Embed slice coordinates into the momentum zero set
    Slice(RunConfig),
    /// Check the self-dual Einstein property of a quotient on a grid
    VerifySde(RunConfig),
    /// Check the hyperbolic eigenvalue equation of a pole set on a grid
    Eigen(RunConfig),
    /// Compare an eigenfunction with the quadratic form on zero-set samples
    Pullback(RunConfig),
    /// Smoothness of weighted circle quotients of the indefinite hyperboloid
    Bergman(RunConfig),
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("QKQ_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Input(format!("QKQ_THREADS must be a positive integer, got `{v}`"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))
}

type Handler = fn(&RunConfig) -> Result<Outcome, CliError>;

fn run(cli: Cli) -> Result<Outcome, CliError> {
    init_threads()?;
    let (f, cfg): (Handler, RunConfig) = match cli.command {
        Command::Classify(c) => (commands::classify, c),
        Command::Moment(c) => (commands::moment, c),
        Command::Slice(c) => (commands::slice, c),
        Command::VerifySde(c) => (commands::verify_sde, c),
        Command::Eigen(c) => (commands::eigen, c),
        Command::Pullback(c) => (commands::pullback, c),
        Command::Bergman(c) => (commands::bergman, c),
    };
    f(&cfg.resolve()?)
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
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
