use dqm_core::Error as CoreError;
use thiserror::Error;

/// Process exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    VerifyFailed = 1,
    Usage = 2,
    Numeric = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config: {0}")]
    Config(String),

    #[error("{0}")]
    Numeric(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{failed} verification check(s) failed")]
    VerifyFailed { failed: usize },
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Io { .. } => ExitCode::Usage,
            CliError::Numeric(_) => ExitCode::Numeric,
            CliError::VerifyFailed { .. } => ExitCode::VerifyFailed,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Integration { ref last_state, .. } => {
                let state: Vec<String> = last_state.iter().map(|v| format!("{v:?}")).collect();
                CliError::Numeric(format!("{e}; last state [{}]", state.join(", ")))
            }
            CoreError::Capability { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}
