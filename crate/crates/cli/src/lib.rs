//! Command-line front end: argument parsing and command execution, kept
//! apart from the binary so both can be tested directly.

mod args;
mod run;

pub use args::{parse_args, Command, CommandRequest, Format};
pub use run::{run, worked_solution, RunReport, EXIT_CONFIGURATION, EXIT_GUARD, EXIT_OK, EXIT_USAGE, MAX_TRIAD_D};
