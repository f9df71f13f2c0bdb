//! Command-line front end for `spinpair`.
//!
//! Runs are described by flat `key=value` files (see [`config`]); the tool
//! evaluates the closed-form solution on a uniform time grid, optionally
//! cross-checks it against the brute-force integrator, and writes CSV plus a
//! gnuplot script for sweeps. Built-in recipes regenerate the standard
//! figure set.

pub mod config;
pub mod figures;
pub mod output;
pub mod run;
pub mod sweep;

use std::path::PathBuf;

pub use config::{ConfigError, InitialState, Observable, RunConfig, SweepConfig, TimeUnit};
pub use run::{run_evolve, run_validate, EvolveOutput, ValidationReport};
pub use sweep::{run_sweep, SweepOutput};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),

    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("numerical failure: {0}")]
    Numerical(#[from] spinpair::Error),

    #[error("sweep member {axis}={value} failed: {source}")]
    SweepMember {
        axis: String,
        value: String,
        #[source]
        source: Box<CliError>,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status: 1 configuration, 2 validation, 3 numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::SweepMember { source, .. } => source.exit_code(),
        }
    }
}
