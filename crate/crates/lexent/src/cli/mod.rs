//! Command-line interface over TSV files.

mod args;
mod commands;
mod output;

pub use args::{Cli, Command, RunConfig};
pub use output::config_header;

use clap::Parser;

use crate::error::Result;

/// Parses `std::env::args` and runs the selected subcommand.
pub fn run() -> Result<()> {
    let cli = Cli::parse();
    commands::dispatch(cli)
}
