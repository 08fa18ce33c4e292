use thiserror::Error;

use rankforge::ingestion::IngestError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit status: 1 for configuration problems, 2 for data.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Data(_) | CliError::Io { .. } => 2,
        }
    }
}

impl From<rankforge::Error> for CliError {
    fn from(e: rankforge::Error) -> Self {
        if let rankforge::Error::Config(msg) = e {
            CliError::Config(msg)
        } else if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Data(e.to_string())
        }
    }
}

impl From<IngestError> for CliError {
    fn from(e: IngestError) -> Self {
        match e {
            IngestError::Config(msg) => CliError::Config(msg),
            IngestError::Data(msg) => CliError::Data(msg),
            IngestError::Io(e) => CliError::io("i/o", e),
            IngestError::Csv(e) => CliError::Data(e.to_string()),
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
