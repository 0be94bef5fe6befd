use std::fmt;

use lvar_core::LvarError;
use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable or invalid scenario.
    Schema(String),
    Io(String),
    Core(LvarError),
}

impl From<LvarError> for CliError {
    fn from(e: LvarError) -> Self {
        CliError::Core(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "schema error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    reason: &'a str,
    message: String,
}

impl CliError {
    pub fn reason(&self) -> &'static str {
        match self {
            CliError::Schema(_) => "schema",
            CliError::Io(_) => "io",
            CliError::Core(e) => e.reason(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Io(_) => 2,
            CliError::Core(LvarError::Structural(_) | LvarError::Domain(_)) => 2,
            CliError::Core(LvarError::Contract(_)) => 3,
            CliError::Core(LvarError::Numeric { .. }) => 4,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ErrorDoc {
            reason: self.reason(),
            message: self.to_string(),
        })
        .expect("error document serializes")
    }
}
