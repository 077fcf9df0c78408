//! Command-line driver: reads a run configuration, executes one task and
//! writes its rows as CSV or JSON.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 solver non-convergence (rows are
//! still written, with a status column), 3 invalid configuration.

pub mod args;
pub mod config;
pub mod error;
pub mod output;
pub mod tasks;

use std::fs::File;
use std::io::{self, BufWriter};

pub use args::{Cli, Format, TaskCommand};
pub use config::{parse_complex, RunConfig, Settings};
pub use error::{CliError, CliResult};
pub use output::Table;
pub use tasks::{execute, Outcome};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_NON_CONVERGENCE: i32 = 2;
pub const EXIT_INVALID_CONFIG: i32 = 3;

/// Loads, executes and writes; returns the outcome that was written.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let cfg = config::load(cli)?;
    let outcome = execute(&cfg)?;
    match &cfg.out {
        Some(path) => outcome.table.write(BufWriter::new(File::create(path)?), cfg.format)?,
        None => outcome.table.write(io::stdout().lock(), cfg.format)?,
    }
    Ok(outcome)
}

/// [`run`] with errors reported on stderr and mapped to an exit code.
pub fn run_to_exit_code(cli: &Cli) -> i32 {
    match run(cli) {
        Ok(o) if o.complete => EXIT_OK,
        Ok(_) => {
            eprintln!("warning: some solves did not converge; see the status column");
            EXIT_NON_CONVERGENCE
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
