//! Command-line front end: channel files, built-in examples and reports.

pub mod commands;
pub mod io;
pub mod json;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Core(#[from] channel_gauge::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for unusable input, 3 for violated preconditions, 4 for solver trouble.
    pub fn exit_code(&self) -> i32 {
        use channel_gauge::Error as E;
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Core(E::Parameter(_) | E::Domain(_)) => 2,
            CliError::Core(E::Precondition(_) | E::Dimension(_) | E::Structure(_)) => 3,
            CliError::Core(E::Solver(_) | E::Numerical(_)) => 4,
        }
    }
}
