//! Experiment harness around the `qcs-core` library: config-driven Monte
//! Carlo sweeps, CSV/plot reporting, matrix import/export, and built-in
//! reproductions of the six reference experiments.
//!
//! The `qcs` binary in this package is a thin command-line front end over
//! these modules; integration tests drive them directly.

pub mod config;
pub mod errors;
pub mod experiment;
pub mod matrix_io;
pub mod report;
pub mod reproduce;
