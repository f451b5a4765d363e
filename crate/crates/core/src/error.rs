use thiserror::Error;

use crate::pfarray::Cell;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A caller-supplied parameter is outside the operation's domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Two values that must live in the same group (or array shape) do not.
    #[error("structural mismatch: {0}")]
    Structural(String),

    /// A diag procedure or ad hoc cell tried to fill an already filled cell.
    #[error("construction collision at {cell}: {detail}")]
    Collision { cell: Cell, detail: String },

    /// An operation was called on data that does not meet its precondition.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// A decomposition or embedding certificate could not be issued.
    #[error("certification failed: {message}")]
    Certification { message: String, witness: Option<String> },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
