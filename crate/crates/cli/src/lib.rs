//! Scenario runs, sample-count sweeps and oracle invocations with
//! machine-readable output.

pub mod commands;
pub mod record;

pub use commands::{oracle, run, sweep, CliError, OracleMode, RunOptions};
pub use record::{read_path_file, write_path_file, RunRecord};
