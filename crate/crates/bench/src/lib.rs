//! Configuration-driven convergence benchmarks over the synthesis library.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod runner;
pub mod selftest;

pub use config::{parse_config, CaseConfig, ConfigError, ExperimentConfig};
pub use runner::{run_suite, RunError};
