//! Command-line front end behind the `fbm-bvp` binary.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 failed verification.

mod commands;
mod config;
mod output;

pub use commands::{ConvergeReport, SolveReport};
pub use config::{parse_config_text, read_config_file, CliConfig, CommandKind, CommonArgs, Format};
pub use output::write_atomic;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VERIFICATION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "fbm-bvp",
    version,
    about = "Finite element and Green's-function solvers for -u'' + f(x, u) = g + dW/dx driven by fractional Brownian motion"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw one increment path and write it cell by cell
    SampleNoise {
        #[command(flatten)]
        common: CommonArgs,
        /// Also test the lag-1 correlation over `--samples` paths
        #[arg(long)]
        self_check: bool,
    },
    /// Solve one path and write the nodal solution
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Replace the noise by zero
        #[arg(long)]
        zero_noise: bool,
    },
    /// Monte Carlo strong-error study along a ladder of grids
    Converge {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Statistical and deterministic verification suite
    Verify {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn exit_code(error: &Error) -> i32 {
    match error {
        Error::NonConvergence { .. }
        | Error::Singular { .. }
        | Error::Factorization(_)
        | Error::Sample { .. }
        | Error::Serialize(_) => EXIT_NUMERICAL,
        _ => EXIT_USAGE,
    }
}

fn execute(command: Command) -> Result<(Option<std::path::PathBuf>, commands::Outcome), Error> {
    let (kind, common) = match &command {
        Command::SampleNoise { common, .. } => (CommandKind::SampleNoise, common),
        Command::Solve { common, .. } => (CommandKind::Solve, common),
        Command::Converge { common } => (CommandKind::Converge, common),
        Command::Verify { common } => (CommandKind::Verify, common),
    };
    let config = CliConfig::resolve(kind, common)?;
    let outcome = match command {
        Command::SampleNoise { self_check, .. } => commands::sample_noise(&config, self_check)?,
        Command::Solve { zero_noise, .. } => commands::solve(&config, zero_noise)?,
        Command::Converge { .. } => commands::converge(&config)?,
        Command::Verify { .. } => commands::verify(&config)?,
    };
    Ok((config.out.clone(), outcome))
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to `--out` or `stdout`; diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (out, outcome) = match execute(cli.command) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &out {
        Some(path) => write_atomic(path, &outcome.text),
        None => stdout
            .write_all(outcome.text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return exit_code(&e);
    }
    for note in &outcome.notes {
        let _ = writeln!(stderr, "{note}");
    }
    if outcome.passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}
