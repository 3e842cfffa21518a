use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error at `{path}`: {message}")]
    Field { path: String, message: String },
    #[error("config error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] phipsim::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Output(String),
}

impl CliError {
    pub fn field(path: impl Into<String>, message: impl ToString) -> Self {
        CliError::Field { path: path.into(), message: message.to_string() }
    }

    /// 2 for bad configuration, 3 for numerical failures, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Field { .. } | CliError::Config(_) => 2,
            CliError::Core(e) if e.is_numeric() => 3,
            CliError::Core(
                phipsim::Error::InvalidArgument(_) | phipsim::Error::InvalidState(_) | phipsim::Error::Unsupported(_),
            ) => 2,
            CliError::Core(_) | CliError::Io { .. } | CliError::Output(_) => 1,
        }
    }
}
