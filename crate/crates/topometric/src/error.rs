use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input data outside its declared domain (bad coordinate, empty
    /// interval, non-closed piece, negative radius, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A stated operation precondition does not hold, with the exact
    /// violating quantity where one exists.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The construction could not proceed: the space failed to deliver the
    /// separation the lemma requires at this instance.
    #[error("structural failure: {0}")]
    Structural(String),

    /// Malformed description file or literal.
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}
