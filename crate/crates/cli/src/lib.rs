//! Experiment harness for the damped σ-evolution spectral laboratory:
//! configuration parsing, the experiment runner, and report rendering.
//! The `sdevo` binary is a thin shell over this library.

// Config validators use `!(x > 0.0)` on purpose: the negated form rejects
// NaN, which `x <= 0.0` silently admits.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiment;
pub mod report;

pub use config::ExperimentConfig;
pub use experiment::run_experiment;
pub use report::ExperimentReport;
