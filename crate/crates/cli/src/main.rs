//! `strongconverse` command-line tool.
//!
//! Exit codes: 0 success, 1 failed invariant, 2 usage error, 3 I/O error,
//! 4 malformed (non-CPTP) channel.

mod args;
mod commands;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::Cli;
use report::{CliError, Outcome};

const THREADS_VAR: &str = "STRONGCONVERSE_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot configure {n} threads: {e}")))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    let start = Instant::now();
    let outcome = match commands::run(&cli.command) {
        Ok(o) => o,
        // Failed invariants still produce a report.
        Err(e) if e.exit_code() == 1 => {
            eprintln!("error: {e}");
            Outcome::failed(e.to_string())
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Err(e) = report::emit(&cli.command, &outcome, start.elapsed().as_secs_f64()) {
        eprintln!("error: {e}");
        return ExitCode::from(e.exit_code());
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        for f in &outcome.failures {
            eprintln!("failed: {f}");
        }
        ExitCode::from(1)
    }
}
