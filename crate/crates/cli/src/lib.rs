//! Command-line front end for the periodic strategy analysis library.
//!
//! The library half of this crate parses game description files, runs all
//! applicable analyses, and renders deterministic text and JSON reports.
//! The binary half (`pstrat`) wires it to the terminal.

pub mod analyze;
pub mod error;
pub mod format;
pub mod report;
pub mod selftest;
