//! Experiment runner around `uqdp-core`: TOML configs, parameter sweeps,
//! thread-pool ensembles, CSV and JSON output, noise spectrum checks and the
//! `uqdp` command line.

pub mod cli;
pub mod config;
pub mod exec;
pub mod experiment;
pub mod output;
pub mod spectrum;
pub mod sweep;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind, Resolved};
pub use exec::ThreadPool;
