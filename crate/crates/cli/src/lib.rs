//! Command-line front end: argument parsing, command dispatch, output.

pub mod args;
pub mod commands;
pub mod report;

use std::fmt;
use std::process::ExitCode;

/// Why a command did not succeed, and the exit status that goes with it.
#[derive(Debug)]
pub enum Failure {
    /// A check ran and found a counterexample.
    Verification(String),
    /// The input was rejected before anything was checked.
    Invalid(String),
    Io(std::io::Error),
}

impl Failure {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Verification(_) => ExitCode::from(1),
            Failure::Invalid(_) | Failure::Io(_) => ExitCode::from(2),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(msg) => write!(f, "verification failed: {msg}"),
            Failure::Invalid(msg) => f.write_str(msg),
            Failure::Io(e) => write!(f, "output error: {e}"),
        }
    }
}
