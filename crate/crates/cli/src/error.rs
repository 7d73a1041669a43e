use thiserror::Error;

/// Failure classes that map onto the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or configuration. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Unreadable or malformed input data, or failed output writes. Exit code 2.
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<apcascade::Error> for CliError {
    fn from(e: apcascade::Error) -> Self {
        use apcascade::Error as E;
        match e {
            E::Parse { .. }
            | E::MissingParty { .. }
            | E::EmptyTrajectory
            | E::DisjointTimeRanges(..)
            | E::EdgelessGraph
            | E::Io(_)
            | E::Json(_) => CliError::Data(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}
