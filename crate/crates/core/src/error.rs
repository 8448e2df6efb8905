use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid generator id `{0}`")]
    InvalidGenerator(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid group description: {0}")]
    Spec(String),

    #[error("path is not reduced at step {0}")]
    NonReducedPath(usize),

    #[error("edge does not belong to any declared orbit: {0}")]
    UnknownOrbit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
