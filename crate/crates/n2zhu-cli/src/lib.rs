//! Command-line front end for `n2zhu`: argument handling, JSON and CSV
//! reports, an on-disk report cache and the acceptance checks.

pub mod cache;
pub mod commands;
pub mod json;
pub mod reproduce;

pub use commands::{run, Command, Format, Outcome, RunConfig};
