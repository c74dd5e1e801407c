//! Error type shared by all analysis modules.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on the inputs was violated.
    Parameter(String),
    /// A computed value became NaN or infinite.
    Numeric { step: usize, detail: String },
    /// An argument fell outside the operation's domain.
    Domain(String),
    /// Bisection bracket endpoints classified identically.
    Bracketing {
        beta: f64,
        lo: f64,
        hi: f64,
        lo_overshoots: bool,
        hi_overshoots: bool,
    },
    /// Input series are unusable (too short, no overlap).
    Data(String),
    /// A lag is unidentifiable from constant input.
    DegenerateInput(String),
    /// Too few samples at the given resolution.
    Resolution(String),
    /// Simulation contradicts the threshold predicate; a potential
    /// conjecture counterexample at this resolution.
    Inconsistency(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Numeric { step, detail } => {
                write!(f, "non-finite value at step {step}: {detail}")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Bracketing {
                beta,
                lo,
                hi,
                lo_overshoots,
                hi_overshoots,
            } => write!(
                f,
                "bracketing failure at beta={beta}: w0={lo} overshoots={lo_overshoots}, \
                 w0={hi} overshoots={hi_overshoots}"
            ),
            Error::Data(msg) => write!(f, "data error: {msg}"),
            Error::DegenerateInput(msg) => write!(f, "degenerate input: {msg}"),
            Error::Resolution(msg) => write!(f, "resolution error: {msg}"),
            Error::Inconsistency(msg) => write!(f, "inconsistency: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
