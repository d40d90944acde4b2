//! Command-line driver: scenario files in, CSV or JSON out.

pub mod args;
pub mod commands;
pub mod error;
pub mod output;
pub mod scenario;

pub use args::{Cli, Command};
pub use error::CliError;
pub use scenario::{CaseSpec, Format, Scenario};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(a) => commands::cmd_solve(a),
        Command::Profile(a) => commands::cmd_profile(a),
        Command::Limit(a) => commands::cmd_limit(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Manufacture(a) => commands::cmd_manufacture(a),
        Command::CheckRestrictions(a) => commands::cmd_check_restrictions(a),
    }
}
