//! Command-line front end for `subm-core`.
//!
//! Commands read JSON spec files, run exact computations, and emit
//! deterministic reports in text or JSON form.

pub mod commands;
pub mod demo;
pub mod report;
pub mod specfile;

use subm_core::pathology::HullError;
use subm_core::spec::EvalError;

pub use commands::{cmd_eval, cmd_pathology, cmd_select, Options, SelectArgs};
pub use report::{Check, Report, Status};
pub use specfile::{load_spec_file, load_spec_str, parse_set, parse_stream, LoadedSpec};

/// Default scan budget; overridden by `SUBM_BUDGET` or `--budget`.
pub const DEFAULT_BUDGET: u64 = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid spec: {0}")]
    Schema(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 1 check failure, 2 usage or schema, 3 budget-inconclusive.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) | CliError::Schema(_) | CliError::Io { .. } => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        match e {
            EvalError::BudgetExhausted { .. } => CliError::Budget(e.to_string()),
            EvalError::OutsideUniverse { .. } | EvalError::TooLarge { .. } => CliError::Usage(e.to_string()),
        }
    }
}

impl From<HullError> for CliError {
    fn from(e: HullError) -> Self {
        match e {
            HullError::Eval(e) => e.into(),
            HullError::TooLarge { .. } => CliError::Usage(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}
