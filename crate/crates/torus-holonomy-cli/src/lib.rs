//! Command-line front end for the torus-holonomy library: parameter
//! parsing, sweeps, and CSV/JSON emission.
//!
//! Output is deterministic: identical configurations produce
//! byte-identical files regardless of `--jobs`.

pub mod angle;
pub mod cli;
pub mod output;
pub mod records;
pub mod sweep;

pub use cli::{run, Cli, CliError};
