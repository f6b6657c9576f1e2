//! Scenario ingestion, analysis reports and the verification suite behind
//! the `momenta` command.

pub mod checks;
pub mod config;
pub mod orbit;
pub mod report;
mod sampling;
