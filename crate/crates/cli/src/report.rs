//! Report envelope, error classes and output.
//!
//! Reports never contain timing information, so identical arguments give
//! byte-identical files. Wall-clock time goes to `<out>.timing.json` next to
//! the report, or to standard error when the report is printed.

use std::path::PathBuf;

use serde::Serialize;
use serde_json::Value;
use strongconverse::Error;
use thiserror::Error as ThisError;

use crate::args::{Command, Format};

pub const TOOL: &str = "strongconverse";

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(e) => match e {
                Error::Io(_) => 3,
                Error::NotCptp(_) => 4,
                Error::InvalidParameter(_)
                | Error::InvalidOrder(_)
                | Error::Parse(_)
                | Error::DimensionMismatch(_)
                | Error::NonSquare { .. }
                | Error::NonHermitian { .. }
                | Error::NegativeEigenvalue { .. }
                | Error::StateInvalid(_)
                | Error::InvalidPovm(_)
                | Error::InvalidEnsemble(_)
                | Error::InvalidProbability(_)
                | Error::DimensionCap { .. } => 2,
                Error::NotEntanglementBreaking | Error::BudgetExhausted { .. } | Error::NotSeparableInput(_) => 1,
            },
        }
    }
}

/// Result of one command before it is wrapped in the envelope.
#[derive(Debug)]
pub struct Outcome {
    pub result: Value,
    pub csv: String,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl Outcome {
    pub fn ok(result: Value, csv: String) -> Self {
        Self {
            result,
            csv,
            passed: true,
            failures: Vec::new(),
        }
    }

    /// A command that stopped on a failed precondition of an invariant.
    pub fn failed(reason: String) -> Self {
        Self {
            result: Value::Null,
            csv: format!("quantity,value\nerror,\"{}\"\n", reason.replace('"', "'")),
            passed: false,
            failures: vec![reason],
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: u64,
    config: &'a Command,
    result: &'a Value,
    passed: bool,
    failures: &'a [String],
}

pub fn render_json(cmd: &Command, o: &Outcome) -> String {
    let env = Envelope {
        tool: TOOL,
        version: env!("CARGO_PKG_VERSION"),
        command: cmd.name(),
        seed: cmd.common().seed,
        config: cmd,
        result: &o.result,
        passed: o.passed,
        failures: &o.failures,
    };
    let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
    s.push('\n');
    s
}

fn timing_path(out: &std::path::Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".timing.json");
    PathBuf::from(name)
}

fn write(path: &std::path::Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Core(Error::Io(format!("{}: {e}", path.display()))))
}

/// Writes the report to `--out` or standard output.
pub fn emit(cmd: &Command, o: &Outcome, elapsed_seconds: f64) -> Result<(), CliError> {
    let common = cmd.common();
    let text = match common.format {
        Format::Json => render_json(cmd, o),
        Format::Csv => o.csv.clone(),
    };
    match &common.out {
        Some(path) => {
            write(path, &text)?;
            let timing = serde_json::json!({
                "command": cmd.name(),
                "elapsed_seconds": elapsed_seconds,
            });
            write(&timing_path(path), &format!("{timing:#}\n"))?;
        }
        None => {
            print!("{text}");
            eprintln!("{}: {elapsed_seconds:.3} s", cmd.name());
        }
    }
    Ok(())
}
