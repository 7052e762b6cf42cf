//! Experiment front end: run bundled or user-written experiment configs,
//! train and apply models on CSV data, and print equilibrium reports.
//!
//! The library half exists so the test suites can drive whole experiments
//! in process; `main` is a thin argument layer over it.

pub mod commands;
pub mod config;
pub mod runner;
pub mod svg;

pub use config::{load_config, parse_c, parse_kernel, ExperimentConfig, BUNDLED};
pub use runner::{oracle_rate, run_experiment, RunSummary, SeedOutcome, Stats};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] gaussian_lab::Error),
    #[error(transparent)]
    Model(#[from] eigenlocus_model::Error),
    #[error(transparent)]
    Gram(#[from] kernel_core::Error),
    #[error("i/o failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("json failed: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for configuration and input-schema problems,
    /// 1 for everything else. (Exit 3, all seeds failing to converge, is
    /// decided from the run summary, not from an error.)
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Json(_) => 2,
            Error::Data(_) | Error::Model(_) | Error::Gram(_) | Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
