use thiserror::Error;
use whichway_core::Error as CoreError;

/// Failure of a command, classified by exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

fn class(e: &CoreError) -> fn(String) -> CliError {
    match e {
        CoreError::Config(_) | CoreError::Aliasing { .. } => CliError::Config,
        CoreError::Data { .. } | CoreError::Io(_) | CoreError::Json(_) => CliError::Data,
        CoreError::Degenerate(_)
        | CoreError::UndefinedStatistics(_)
        | CoreError::NotComputable { .. }
        | CoreError::Domain(_) => CliError::Numerical,
        CoreError::Step { source, .. } => class(source),
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        class(&e)(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
