//! Command implementations behind the `splitred` binary.

pub mod golden;
pub mod output;
pub mod scan;
pub mod scenario;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Schema(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("inconclusive result under --strict")]
    Strict,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Precondition(_) => 1,
            CliError::Strict => 3,
        }
    }
}

/// Reads and runs a scenario file, returning the report as JSON text.
pub fn run_file(path: &std::path::Path, opts: &scenario::RunOptions, strict: bool) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Schema(format!("{}: {e}", path.display())))?;
    let sc = scenario::parse_scenario(&text)?;
    let outcome = scenario::run_scenario(&sc, opts)?;
    let text = output::to_json(&outcome.report);
    if strict && outcome.is_inconclusive() {
        print!("{text}");
        return Err(CliError::Strict);
    }
    Ok(text)
}
