//! Harness behind the `vqls-heat` binary: label parsing, restarted solves,
//! repetition-averaged sweeps, artifact emission and figure presets.
//!
//! Everything here is deterministic in the master seed; the binary is a thin
//! argument-parsing shell over these modules so that integration tests can
//! drive the same code paths in process.

pub mod config;
pub mod error;
pub mod fit;
pub mod labels;
pub mod report;
pub mod repro;
pub mod solve;
pub mod sweeps;

pub use error::{CliError, Result};
