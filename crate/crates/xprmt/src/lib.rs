//! Seeded figure experiments and checker commands over `qchan`, with a
//! stable JSON schema for matrices, Kraus sets and codes.

pub mod cli;
pub mod commands;
pub mod error;
pub mod experiments;
pub mod json;

pub use error::{CliError, CliResult};
pub use experiments::{cmd_fig1, cmd_fig2, cmd_fig3, ExperimentRecord, RunOptions};

/// Default tolerance for figure experiments and residual checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Exit status of a completed command.
pub fn exit_code(passed: bool) -> i32 {
    if passed {
        0
    } else {
        1
    }
}
