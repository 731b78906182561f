use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed state file: {0}")]
    Format(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("family `{family}` needs --{flag}")]
    MissingParameter { family: String, flag: &'static str },
    #[error(transparent)]
    Core(#[from] separability::Error),
}
