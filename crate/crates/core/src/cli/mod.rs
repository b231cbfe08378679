//! The `dyncons` command-line front end.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 on success, 2 for invalid input (bad flags, parameters
//! outside the model's domain, no coexistence equilibrium), 3 when a
//! trajectory leaves the domain or stops being finite. I/O failures exit 1.
//!
//! Values come from flags, then from the `--config` JSON file, then from
//! built-in defaults (the reference parameters `α = 0.7, β = 0.9, δ = 0.6`,
//! `h = 0.1`, `s0 = (0.2, 0.2)`, and `r = 3, K = 50, x0 = 0.4`).

mod args;
mod commands;
pub mod output;
mod repro;

use std::ffi::OsString;
use std::io::{self, Write};

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Settings};
pub use output::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug)]
pub(crate) enum CliError {
    Invalid(String),
    Numerical(String),
    Io(io::Error),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Numerical(_) => EXIT_NUMERICAL,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) => f.write_str(m),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        use crate::Error::*;
        match e {
            Domain(_) | NonFinite { .. } | StepFailure { .. } => CliError::Numerical(e.to_string()),
            Existence { .. } | Condition(_) | InvalidParameter(_) => {
                CliError::Invalid(e.to_string())
            }
        }
    }
}

pub(crate) type CliResult<T = ()> = std::result::Result<T, CliError>;

/// Runs the command line `args` (including the program name) and returns
/// the exit code. Data goes to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_INVALID
                }
            };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

/// [`run`] on the process arguments and standard streams.
pub fn main_entry() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    let _ = io::stdout().flush();
    code
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CliResult {
    let file = match &cli.config {
        Some(path) => Settings::load(path).map_err(CliError::Invalid)?,
        None => Settings::default(),
    };
    match &cli.command {
        Command::Simulate(a) => {
            commands::simulate(&Settings::from(a).over(file), a.out.as_deref(), stdout)
        }
        Command::Stability(a) => commands::stability(&Settings::from(a).over(file), stdout),
        Command::Bifurcate(a) => commands::bifurcate(
            &Settings::from(a).over(file),
            a.out.as_deref(),
            a.plot_script.as_deref(),
            stdout,
        ),
        Command::Compare(a) => commands::compare(&Settings::from(a).over(file), &a.out_dir, stdout),
        Command::Repro(a) => {
            let s = Settings {
                jobs: a.jobs,
                ..Default::default()
            }
            .over(file);
            repro::repro(&s, a.out_dir.as_deref(), stdout)
        }
    }
}
