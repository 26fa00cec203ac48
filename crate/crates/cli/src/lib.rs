//! Command-line front end for `gauge-curves`.
//!
//! Every subcommand is also available as a `cmd_*` function taking a parsed
//! configuration, and [`run`] executes a full argument vector without
//! touching the process, so the binary is a thin wrapper.

pub mod commands;
pub mod config;
pub mod output;
pub mod registry;

use std::ffi::OsString;
use std::fmt;

use clap::Parser;

pub use commands::{
    cmd_classify, cmd_frame, cmd_invariants, cmd_translate_check, cmd_verify_gauge, Report,
};
pub use config::{Cli, Command, GaugeConfig, RunConfig};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const NUMERICAL: i32 = 3;
    pub const INADMISSIBLE_TRANSLATION: i32 = 4;
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    /// A numerical failure, with the curve parameter where it happened.
    Numerical {
        t: Option<f64>,
        error: gauge_curves::Error,
    },
    /// A check ran to completion and failed.
    CheckFailed(String),
    OriginNotInterior(f64),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Numerical { .. } | CliError::CheckFailed(_) => exit::NUMERICAL,
            CliError::OriginNotInterior(_) => exit::INADMISSIBLE_TRANSLATION,
        }
    }

    pub fn at(t: f64) -> impl FnOnce(gauge_curves::Error) -> CliError {
        move |error| match error {
            gauge_curves::Error::OriginNotInterior { value } => CliError::OriginNotInterior(value),
            error => CliError::Numerical { t: Some(t), error },
        }
    }
}

impl From<gauge_curves::Error> for CliError {
    /// Errors raised while building gauges and curves from a configuration.
    fn from(e: gauge_curves::Error) -> Self {
        use gauge_curves::Error as E;
        match e {
            E::OriginNotInterior { value } => CliError::OriginNotInterior(value),
            E::InvalidParameter(_)
            | E::InsufficientPoints { .. }
            | E::NonMonotoneGrid { .. }
            | E::TooFewSamples { .. } => CliError::Config(e.to_string()),
            error => CliError::Numerical { t: None, error },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerical { t: Some(t), error } => {
                write!(f, "numerical failure at t = {t}: {error}")
            }
            CliError::Numerical { t: None, error } => write!(f, "numerical failure: {error}"),
            CliError::CheckFailed(msg) => write!(f, "check failed: {msg}"),
            CliError::OriginNotInterior(v) => {
                write!(
                    f,
                    "translated unit ball does not contain the origin (F(-a0) = {v})"
                )
            }
        }
    }
}

impl std::error::Error for CliError {}

/// Result of [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and execute the subcommand.
///
/// Output goes to `stdout` unless `--out` names a file.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                exit::CONFIG
            } else {
                exit::SUCCESS
            };
            let text = e.render().to_string();
            return if code == exit::SUCCESS {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let result = commands::execute(&cli.command).and_then(|report| {
        let out = cli.command.out_path();
        match out {
            Some(path) => {
                std::fs::write(path, &report.text).map_err(|e| {
                    CliError::Config(format!("cannot write {}: {e}", path.display()))
                })?;
                Ok(Report {
                    text: String::new(),
                    ..report
                })
            }
            None => Ok(report),
        }
    });
    match result {
        Ok(report) => Outcome {
            code: report.code,
            stdout: report.text,
            stderr: report.note,
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("{e}\n"),
        },
    }
}
