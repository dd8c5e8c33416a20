//! Command-line plumbing for `czlab`: seeded instance families, verification
//! suites, and JSON/CSV input and output.
//!
//! Exit status: 0 on success, 1 when a report records a property violation
//! (the violating instance is part of the report), 2 on input or domain
//! errors.

pub mod commands;
pub mod error;
pub mod families;
pub mod io;
pub mod suites;

pub use commands::{run, Outcome, RunConfig};
pub use error::{CliError, CliResult};
pub use families::{generate_instances, Family, Instance};
pub use suites::{run_suite, Suite, SuiteReport};
