//! Command-line front end for the lattice simulator: config loading, single
//! runs and parallel sweeps.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod run;
pub mod sweep;

pub use config::{load_config, parse_config, BranchName, Overrides, RegimeName, RunConfig};
pub use error::CliError;
pub use run::{execute, RunReport, RunStatus, Summary};
pub use sweep::{run_sweep, SweepEntry, SweepIndex};
