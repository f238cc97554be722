//! Spec files, reports and the `qam` command-line front end.

pub mod cli;
pub mod report;
mod scenarios;
pub mod spec;
mod suites;

pub use spec::GenSpec;
