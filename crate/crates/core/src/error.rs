use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied argument is outside the operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The experiment state does not satisfy the operation's precondition.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// A special function was evaluated outside the region where it is a bijection.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical routine failed in a way its preconditions should rule out.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
