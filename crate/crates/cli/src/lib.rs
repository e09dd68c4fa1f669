//! Experiment harness for the heavy-tailed Brownian transform library:
//! seeded Monte Carlo drivers, deterministic reports, and configuration.
//!
//! The binary in this package is a thin shell over [`experiments`]; the
//! runners are exposed as a library so integration and acceptance tests
//! can drive them in-process at full scale.

pub mod config;
pub mod experiments;
pub mod report;
