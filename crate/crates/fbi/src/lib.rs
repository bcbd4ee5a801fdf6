//! Command-line front end, configuration and output formats for the FBI transform toolkit.

pub mod acceptance;
pub mod commands;
pub mod config;
pub mod dto;
pub mod error;
pub mod experiments;
pub mod output;

pub use commands::{run, Command, Outcome, SymbolOp, WavefrontOp};
pub use config::RunConfig;
pub use error::CliError;
