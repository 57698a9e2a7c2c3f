use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error in {origin}: {message}")]
    Config { origin: String, message: String },
    #[error("`{key}` is required for {context}")]
    MissingKey { key: &'static str, context: String },
    #[error("{context}: {source}")]
    Numerics {
        context: String,
        #[source]
        source: wellposed::Error,
    },
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("serializing report: {0}")]
    Serialize(String),
}

pub(crate) trait Context<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError>;
}

impl<T> Context<T> for wellposed::Result<T> {
    fn context(self, what: impl FnOnce() -> String) -> Result<T, CliError> {
        self.map_err(|source| CliError::Numerics { context: what(), source })
    }
}
