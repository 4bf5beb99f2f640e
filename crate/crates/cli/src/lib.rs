//! Command-line front end for `lattice-incr`: file format, subcommands and
//! the incremental-vs-batch benchmark. The binary in `main.rs` is a thin
//! argument parser over these functions.

pub mod bench;
pub mod commands;
pub mod format;

pub use commands::{cmd_basis, cmd_decompose, cmd_minima, exit, BoundArgs, CliError, Flags, Outcome, RunReport};
pub use format::{LatticeFile, ParseError};
