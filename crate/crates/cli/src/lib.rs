//! Command-line front end for the N-unital enumeration: output formats,
//! built-in reference data and verification reports.

pub mod cli;
pub mod commands;
pub mod expr;
pub mod refdata;
pub mod verify;

pub use cli::Cli;
pub use commands::{run, Outcome, EXIT_MISMATCH, EXIT_OK, EXIT_USAGE};
