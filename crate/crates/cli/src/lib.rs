//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod output;

pub use commands::{CritvalArgs, Figure3Args, IndexArgs, SimulateArgs, VerifyArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_PARSE_ERROR: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "mhtgame",
    version,
    about = "Optimal multiple testing adjustments from research costs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-test size and critical value of the optimal separate t-tests.
    Critval(CritvalArgs),
    /// Optimal per-test size against the number of hypotheses.
    Figure3(Figure3Args),
    /// Grid check of maximin optimality plus local power.
    Verify(VerifyArgs),
    /// Play the game at one parameter value.
    Simulate(SimulateArgs),
    /// Build an index test from a covariance matrix.
    Index(IndexArgs),
}

#[derive(Debug)]
pub(crate) enum CliError {
    Parse(String),
    Invalid(String),
    /// The reader went away; not worth an error message.
    ClosedPipe,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE_ERROR,
            CliError::Invalid(_) => EXIT_INVALID_INPUT,
            CliError::ClosedPipe => EXIT_OK,
        }
    }
}

impl From<mhtgame::Error> for CliError {
    fn from(e: mhtgame::Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return CliError::ClosedPipe;
        }
        CliError::Invalid(e.to_string())
    }
}

pub(crate) type CliResult<T> = Result<T, CliError>;

/// Runs one command line and returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let args = match config::expand(args) {
        Ok(a) => a,
        Err(e) => return report(err, e),
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_PARSE_ERROR } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Critval(a) => commands::critval(&a, out),
        Command::Figure3(a) => commands::figure3(&a, out),
        Command::Verify(a) => commands::verify(&a, out),
        Command::Simulate(a) => commands::simulate(&a, out),
        Command::Index(a) => commands::index(&a, out),
    };
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VERIFICATION_FAILED,
        Err(e) => report(err, e),
    }
}

fn report(err: &mut dyn Write, e: CliError) -> i32 {
    let msg = match &e {
        CliError::Parse(m) => format!("parse error: {m}"),
        CliError::Invalid(m) => format!("invalid input: {m}"),
        CliError::ClosedPipe => return e.code(),
    };
    let _ = writeln!(err, "error: {msg}");
    e.code()
}
