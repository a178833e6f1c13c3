use thiserror::Error;

/// Errors raised by the simulation and evaluation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A kernel was evaluated on the diagonal, where it is left undefined.
    #[error("singular input: {0}")]
    SingularInput(String),

    /// The orbit reached the indifferent fixed point and can no longer move.
    #[error("orbit trapped at fixed point x = {0}")]
    TrappedOrbit(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
