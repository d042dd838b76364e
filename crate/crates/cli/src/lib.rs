//! Library surface of the `erasure-bounds` command-line tool: argument
//! definitions, command implementations, and the table/chart writers they
//! share. The binary in `main.rs` is a thin wrapper so integration tests can
//! drive the same code paths directly.

pub mod args;
pub mod chart;
pub mod commands;
pub mod error;
pub mod table;

pub use args::Cli;
pub use error::CliError;
