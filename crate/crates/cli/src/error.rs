use stabgap_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Core(Error),
    #[error("refused: {0}")]
    Limit(Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => CliError::Limit(e),
            e => CliError::Core(e),
        }
    }
}

impl CliError {
    /// 2 for bad input, 3 for size-limit refusals.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Limit(_) => 3,
            _ => 2,
        }
    }
}
