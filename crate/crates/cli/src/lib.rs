//! Batch front-end for the RAQ-MIMO simulator: scenario files, sweeps,
//! figure data and verification suites. The `raqmimo` binary is a thin
//! wrapper around this library.

pub mod config;
pub mod error;
pub mod feasible;
pub mod figures;
pub mod output;
pub mod scenario;
pub mod verify;

pub use config::ScenarioConfig;
pub use error::{CliError, CliResult};
