//! Benchmark harness for the Poisson-Boltzmann Newton-Krylov solver.
//!
//! Reads a flat `key = value` config, assembles one discrete system, solves
//! it once per inner-tolerance strategy and writes per-iteration CSV
//! telemetry plus a plain-text comparison summary. A dense Newton solver
//! with direct inner solves serves as an independent correctness oracle on
//! small grids.

#![cfg_attr(test, allow(clippy::needless_range_loop))]

pub mod config;
pub mod oracle;
pub mod report;
pub mod runner;

use thiserror::Error;

pub use config::{parse_config, parse_config_str, BenchConfig, StrategyKind};
pub use oracle::{oracle_solve, verify, VerifyReport, ORACLE_AGREEMENT_TOL};
pub use report::{ComparisonSummary, StrategySummary};
pub use runner::{run_benchmark, run_benchmark_in, BenchOutcome};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("invalid value for `{key}`: {message}")]
    Validation { key: String, message: String },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("strategy `{strategy}` failed: {message}")]
    Solver { strategy: String, message: String },

    #[error("oracle: {0}")]
    Oracle(String),

    #[error("oracle disagreement: max |p_sparse - p_dense| = {max_diff:e} for `{strategy}` (limit {limit:e})")]
    Disagreement {
        strategy: String,
        max_diff: f64,
        limit: f64,
    },
}

impl BenchError {
    /// Process exit code for the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Parse { .. } | BenchError::Validation { .. } | BenchError::Io { .. } => 1,
            BenchError::Solver { .. } | BenchError::Oracle(_) => 2,
            BenchError::Disagreement { .. } => 3,
        }
    }

    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        BenchError::Io {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn invalid(key: &str, message: impl Into<String>) -> Self {
        BenchError::Validation {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

pub(crate) fn display_path(p: &std::path::Path) -> String {
    p.display().to_string()
}
