//! Command-line front end: a small declared-parameter parser and the
//! `run`, `irace-config`, `count`, `landscape` and `bench` subcommands.

pub mod args;
pub mod commands;

pub use args::{help_text, parse, CliError, ParsedArgs, Provenance};
pub use commands::{dispatch, slot_parameters};

/// Exit status for a usage error.
pub const EXIT_USAGE: i32 = 2;
/// Exit status for a failure while running.
pub const EXIT_RUNTIME: i32 = 3;
