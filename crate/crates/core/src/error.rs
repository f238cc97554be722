use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain where the operation is defined.
    Domain(String),
    /// Target value is not bracketed by the function values at the endpoints.
    Range { target: f64, lo: f64, hi: f64 },
    /// Adaptive refinement ran out of budget; `estimate` is the best value found.
    Accuracy { estimate: f64, error: f64 },
    /// The generator lacks a smoothness property the operation needs.
    Capability(String),
    /// A caller-supplied precondition does not hold.
    Precondition(String),
    /// Two independent computations that must agree did not.
    Consistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Range { target, lo, hi } => {
                write!(f, "range error: {target} is not between {lo} and {hi}")
            }
            Error::Accuracy { estimate, error } => write!(
                f,
                "accuracy error: refinement budget exhausted (estimate {estimate}, error {error:e})"
            ),
            Error::Capability(msg) => write!(f, "capability error: {msg}"),
            Error::Precondition(msg) => write!(f, "precondition failed: {msg}"),
            Error::Consistency(msg) => write!(f, "consistency check failed: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
macro_rules! capability {
    ($($arg:tt)*) => { $crate::Error::Capability(alloc::format!($($arg)*)) };
}
macro_rules! precondition {
    ($($arg:tt)*) => { $crate::Error::Precondition(alloc::format!($($arg)*)) };
}
pub(crate) use {capability, domain, precondition};
