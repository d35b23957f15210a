//! File formats, experiment runner and command line for `hyperlab-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;

pub use error::{CliError, Result};
