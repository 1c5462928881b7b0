use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The caller passed arguments outside an operation's domain.
    #[error("usage error: {0}")]
    Usage(String),
    /// An internal invariant failed, e.g. a differential that does not square to zero.
    #[error("structural error: {0}")]
    Structural(String),
    /// A quantity the available theory does not determine.
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
