//! Experiment harness for the cooperative MEC solver: builds scenarios from
//! a config file, sweeps block length, task size or helper position, and
//! writes CSV for plotting.
//!
//! All solver work lives in `coopmec-core`; this crate adds file formats,
//! parallel sweeps and the `coopmec` command-line tool.

pub mod config;
pub mod sweep;
pub mod tables;

pub use config::{ConfigError, ExperimentConfig, SweepVariable};
pub use sweep::{run_sweep, write_csv, Outcome, SweepRow};
pub use tables::{feasibility_table, oracle_table, FeasibilityRow, OracleRow};
