//! Harness-level errors and their process exit codes.

use vqls_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flags, labels, config files, or inconsistent options.
    #[error("{0}")]
    Usage(String),
    /// Propagated numerical failure (singular systems, non-finite values).
    #[error(transparent)]
    Core(#[from] CoreError),
    /// A solve command exhausted its restarts without reaching the threshold.
    #[error("did not converge: {0}")]
    NonConverged(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Serialize {
        context: String,
        #[source]
        source: serde_json::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> Self {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }

    /// Exit codes: 1 usage, 2 numerical failure, 3 non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::NonConverged(_) => 3,
            CliError::Core(CoreError::InvalidArgument(_))
            | CliError::Core(CoreError::PauliParse { .. }) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
