use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] synchrotree::Error),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("bad config: {0}")]
    Config(String),

    #[error("unknown experiment {0:?}")]
    UnknownExperiment(String),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
