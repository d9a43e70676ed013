//! Command-line front end: CSV ingestion, fitting, bootstrap, simulation,
//! benchmarking and the exact bias table.

mod benchmark;
mod commands;
mod io;
mod scale;

pub use benchmark::{run_benchmark, write_benchmark, BenchmarkRow};
pub use commands::{run, Cli, Command, CommonArgs, RunConfig};
pub use io::{ingest, ingest_from, write_rankings, write_scores, LabeledDataset};
pub use scale::ScoreScale;

use crate::error::Error;

/// Process exit status for a failure.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::NodeBudget { .. } | Error::BruteForceCap { .. } => 3,
        Error::LpIterationCap { .. } => 4,
        _ => 2,
    }
}

/// Exit status for a run that completed without a certified optimum.
pub const EXIT_BUDGET: i32 = 3;
