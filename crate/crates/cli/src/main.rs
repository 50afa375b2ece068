use std::io;
use std::process::ExitCode;

use clap::Parser;
use dps_workbench::{resolve, run, Cli, CliError, EXIT_ERROR, EXIT_MISMATCH};

fn fail(e: CliError) -> ExitCode {
    eprintln!("{}", serde_json::to_string(&e.record()).expect("error record serializes"));
    ExitCode::from(EXIT_ERROR as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(cli, io::stdin().lock()) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    match run(&cfg) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_MISMATCH as u8),
        Err(e) => fail(e),
    }
}
