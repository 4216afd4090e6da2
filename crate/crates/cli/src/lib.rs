//! Command-line front end: family documents, subcommands, experiment grids.

pub mod commands;
pub mod document;
pub mod error;
pub mod experiment;

pub use commands::{run, Cli};
pub use error::{CliError, ErrorKind};
