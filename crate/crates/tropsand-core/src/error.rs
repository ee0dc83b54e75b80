use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the domain of the operation.
    Domain(String),
    /// A precondition the caller was responsible for did not hold.
    Contract(String),
    /// A toppling, step or iteration budget ran out.
    Budget { limit: u64, what: &'static str },
    /// An experiment failed to settle into the expected regime.
    NotStabilized(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Contract(m) => write!(f, "contract violation: {m}"),
            Error::Budget { limit, what } => write!(f, "{what} budget of {limit} exceeded"),
            Error::NotStabilized(m) => write!(f, "not stabilized: {m}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
