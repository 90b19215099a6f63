use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unresolved {kind} `{name}`")]
    Unresolved { kind: &'static str, name: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("step `{step}`: {source}")]
    Domain { step: String, source: densprob_core::Error },
}

impl CliError {
    /// 1 for bad input, 2 for failures inside a computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn invalid(e: impl std::fmt::Display) -> Self {
        CliError::Invalid(e.to_string())
    }
}
