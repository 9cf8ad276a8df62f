//! Command-line front end for the `bisiegel` library.
//!
//! All input files are JSON documents (`-` reads standard input). Results are
//! written to standard output as JSON, JSON Lines or CSV with floats printed
//! as `%.15g`. Exit codes: 0 on success, 2 on invalid input, 3 on numerical
//! breakdown, 1 when `verify` finds a failing check.

pub mod app;
pub mod output;
pub mod verify;
