use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Caller supplied inconsistent or out-of-range data.
    Input(String),
    /// Text could not be parsed as an exact scalar.
    Parse { input: String, reason: &'static str },
    /// Path resampling could not meet the endpoint tolerance.
    Refinement { mismatch: f64, doublings: u32 },
    /// Adaptive quadrature did not settle.
    Quadrature { component: usize, delta: f64, doublings: u32 },
    /// Step-halving comparison of an ODE integration exceeded its tolerance.
    Integration { what: &'static str, discrepancy: f64, tolerance: f64 },
    /// Operation is not available for this scenario.
    Capability(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(msg) => write!(f, "input error: {msg}"),
            Error::Parse { input, reason } => write!(f, "cannot parse {input:?}: {reason}"),
            Error::Refinement { mismatch, doublings } => write!(
                f,
                "path resampling endpoint mismatch {mismatch:e} after {doublings} doublings"
            ),
            Error::Quadrature { component, delta, doublings } => write!(
                f,
                "quadrature did not converge for component {component}: successive estimates differ by {delta:e} after {doublings} doublings"
            ),
            Error::Integration { what, discrepancy, tolerance } => write!(
                f,
                "{what}: step-halving discrepancy {discrepancy:e} exceeds {tolerance:e}"
            ),
            Error::Capability(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}
