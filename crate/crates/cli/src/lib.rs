//! Command-line front end. The binary is a thin wrapper over [`main_with_args`]
//! so that the whole dispatch path can be exercised from tests.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use error::{CliError, CliResult};

/// Parses `args`, runs the command, and returns the process exit code:
/// 0 on success, 1 on usage errors, 2 on data errors.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    if let Some(n) = cli.jobs {
        // A pool configured earlier in the same process wins; that only
        // happens when commands run in-process from tests.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global();
    }
    match commands::dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
