//! File formats, reports and subcommands of the `separability` binary.

#![forbid(unsafe_code)]

pub mod commands;
mod error;
pub mod report;
pub mod state_file;

pub use error::CliError;
