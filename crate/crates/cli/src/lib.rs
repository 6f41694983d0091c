//! Library side of the `trivalent` command: configuration, command bodies,
//! the verification suite and its reports.

pub mod commands;
pub mod config;
pub mod report;
pub mod suite;
