use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid state text {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("poset has {size} points, brute force is limited to {limit}")]
    TooLarge { size: usize, limit: usize },

    #[error("walk ends inside a group opened at step {start}")]
    MalformedWalk { start: usize },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}
