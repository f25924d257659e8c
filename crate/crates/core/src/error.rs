use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad input: parameters, indices, specs, structures.
    #[error("{0}")]
    Validation(String),
    /// A cancellation-prone computation drifted outside its tolerance.
    #[error("numeric instability: {0}")]
    NumericInstability(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::NumericInstability(msg.into())
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::NumericInstability(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
