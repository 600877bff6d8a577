//! Command-line front end for `fbn-probe`.
//!
//! Each subcommand emits one plot-ready table (CSV or JSON) that embeds its
//! full configuration, so `fbn-probe replay FILE` regenerates the file
//! byte for byte.

pub mod args;
pub mod commands;
pub mod error;
pub mod table;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::{CliError, Result};

pub use crate::error::CliError as Error;

/// Runs one command and writes its output. Oracle failures are reported
/// after the table has been written.
pub fn run_command(mut cmd: Command) -> Result<()> {
    if let Command::Replay(replay) = &cmd {
        let text = std::fs::read_to_string(&replay.input).map_err(|source| CliError::Read {
            path: replay.input.clone(),
            source,
        })?;
        let out = replay.out.clone();
        cmd = table::embedded_config(&text, &replay.input)?;
        if let Some(o) = cmd.output_mut() {
            o.out = out;
        }
    }
    let report = commands::execute(&cmd)?;
    let output = cmd.output().expect("runnable command has output settings");
    let bytes = report.table.render(&cmd, output.format)?;
    write_output(output.out.as_deref(), &bytes)?;
    match report.failure {
        Some(msg) => Err(CliError::Oracle(msg)),
        None => Ok(()),
    }
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes).map_err(|source| CliError::Write {
            path: p.to_path_buf(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|source| CliError::Write {
                path: PathBuf::from("<stdout>"),
                source,
            }),
    }
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run<I, T>(argv: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_command(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
