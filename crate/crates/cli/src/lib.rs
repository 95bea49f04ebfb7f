//! Report types and suite runners behind the `qmink` command.

pub mod report;
pub mod suites;
