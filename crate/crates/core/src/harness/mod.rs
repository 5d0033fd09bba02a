//! Solver subprocess harness, exact oracle, benchmark grid and reports.

mod adapter;
mod bench;
mod oracle;
mod report;
mod solve;

use thiserror::Error;

use crate::encode::DecodeError;
use crate::mipir::MipError;
use crate::validate::ValidationReport;

pub use adapter::{
    normalize, run_solver, Dialect, NormalizedOutput, SolverAdapter, SolverRun, SolverStatus,
    DIALECT_ENV, HIGHS_SCRIPT, SOLVER_ENV,
};
pub use bench::{bench, read_csv, write_csv, BenchConfig, BenchRecord, CSV_HEADER, NOT_SOLVED};
pub use oracle::{
    enumerate_xi, oracle, OracleError, OracleLimits, OracleOptions, OracleResult, Semantics,
};
pub use report::{render_markdown, ReportLabel};
pub use solve::{solve, solve_encoding, SolveOutcome, DEFAULT_TIME_LIMIT_S, OBJECTIVE_TOL};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("model emission failed: {0}")]
    Encode(MipError),
    #[error("I/O: {0}")]
    Io(#[from] std::io::Error),
    #[error("solver process `{command}` failed: {detail}")]
    Process { command: String, detail: String },
    #[error("unparsable solver output: {0}")]
    UnparsableOutput(String),
    #[error("solver assignment violates the model: {0}")]
    InvalidAssignment(String),
    #[error("cannot decode solver assignment: {0}")]
    Decode(#[from] DecodeError),
    #[error("validator rejected the solver's solution:\n{0}")]
    ValidatorRejected(ValidationReport),
    #[error("solver objective {solver} differs from recomputed value {xi}")]
    ObjectiveMismatch { solver: f64, xi: f64 },
}

impl HarnessError {
    /// Process exit code class: 2 input, 3 verification, 4 solver process.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) | HarnessError::Encode(_) => 2,
            HarnessError::Io(_) | HarnessError::Process { .. } | HarnessError::UnparsableOutput(_) => 4,
            HarnessError::InvalidAssignment(_)
            | HarnessError::Decode(_)
            | HarnessError::ValidatorRejected(_)
            | HarnessError::ObjectiveMismatch { .. } => 3,
        }
    }
}
