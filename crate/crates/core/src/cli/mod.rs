//! Command-line front end. Every subcommand writes its outputs plus a
//! `manifest.txt` into `--out`; exit code 0 on success, 2 on usage or input
//! errors, 3 on numeric failures.

mod args;
mod commands;
mod manifest;

use clap::Parser;

pub use args::Cli;
pub use manifest::RunManifest;

use crate::error::{Error, Result};
use args::Command;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    if e.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_INPUT
    }
}

pub fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Partition(a) => commands::partition(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Verify(a) => commands::verify(a),
        Command::Decay(a) => commands::decay(a),
        Command::Train(a) => commands::train_cmd(a),
        Command::Ksweep(a) => commands::ksweep(a),
        Command::Depthsweep(a) => commands::depthsweep(a),
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match dispatch(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
