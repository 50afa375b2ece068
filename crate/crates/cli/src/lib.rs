//! Library half of the `dpsw` command: configuration, subcommands,
//! reports. The binary only parses arguments and maps the outcome to an
//! exit status.

pub mod commands;
pub mod config;
mod error;
pub mod output;
pub mod report;

use std::fs::File;
use std::io::{self, BufWriter, Write};

pub use commands::{execute, Outcome};
pub use config::{resolve, Cli, Command, Format, RunConfig};
pub use error::{CliError, ErrorRecord, Result};
pub use report::{parse_report, report_schema_version, Check, GenusRecord, VerificationReport};

/// Exit status for a report with a mismatch.
pub const EXIT_MISMATCH: i32 = 1;
/// Exit status for an error (the error record goes to stderr).
pub const EXIT_ERROR: i32 = 2;

/// Runs the command on a pool of `cfg.threads` workers and writes the
/// report. Returns whether every check matched.
pub fn run(cfg: &RunConfig) -> Result<bool> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build()?;
    let outcome = pool.install(|| execute(cfg))?;
    match &cfg.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            output::render(&outcome, cfg.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            output::render(&outcome, cfg.format, &mut w)?;
        }
    }
    Ok(outcome.all_match)
}
