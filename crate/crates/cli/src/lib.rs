//! Front end for `dqm-core`: formula tables, trajectories, self-verification,
//! figure data, parameter sweeps and registry replay.
//!
//! Every command writes deterministic CSV or JSON. Floats use the shortest
//! decimal that round-trips, so repeated runs compare byte for byte.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod grid;
pub mod output;

pub use cli::{run, Cli};
pub use config::{Format, RunConfig};
pub use error::{CliError, ExitCode};
