//! Command-line front end, material files and CSV/SVG output for
//! [`casimir_core`].

use std::path::PathBuf;

pub mod checks;
pub mod cli;
pub mod config;
pub mod exec;
pub mod output;
pub mod presets;
pub mod svg;

pub use casimir_core;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Core(#[from] casimir_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    NotConverged(String),
    #[error("{0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use casimir_core::Error as E;
        match self {
            CliError::Core(E::NotConverged { .. } | E::IndeterminateSign { .. }) | CliError::NotConverged(_) => 2,
            CliError::Invariant(_) => 3,
            _ => 1,
        }
    }
}
