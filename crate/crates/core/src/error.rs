use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A grid definition was rejected; `detail` names the offending coordinate.
    #[error("invalid grid: {detail}")]
    InvalidGrid { detail: String },

    #[error("state space too large: {pairs} state-action pairs exceeds cap of {cap}")]
    TooLarge { pairs: u128, cap: u128 },

    #[error("value iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
