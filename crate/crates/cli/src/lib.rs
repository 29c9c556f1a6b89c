//! Library side of the `squeezelab` command-line tool: flag parsing, the four
//! subcommands and the sample file formats.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use config::{Cli, Command};
use error::CliError;

/// Run a parsed command; returns the text to print on success.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Eval(a) => commands::eval(&a.resolve()?),
        Command::Verify(a) => commands::verify(&a.resolve()?),
        Command::Animate(a) => commands::animate(&a.resolve()?),
        Command::Identities(a) => commands::identities(&a.resolve()?),
    }
}
