use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input failed validation (bad parameters, grid too small, malformed data).
    Invalid(String),
    /// An operation's precondition did not hold.
    Precondition(String),
    /// The tangent became lightlike at the given sample.
    NonNullViolation { index: usize },
    /// A frame could not be built because the causal characters changed along the data.
    FrameDegenerate { index: usize, reason: String },
    /// A denominator fell below its guard at the listed flat grid indices.
    DivisionDegenerate { what: String, indices: Vec<usize> },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for errors caused by the data's geometry rather than by malformed input.
    pub fn is_degenerate(&self) -> bool {
        matches!(
            self,
            Error::NonNullViolation { .. } | Error::FrameDegenerate { .. } | Error::DivisionDegenerate { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Invalid(m) => write!(f, "invalid input: {m}"),
            Error::Precondition(m) => write!(f, "precondition failed: {m}"),
            Error::NonNullViolation { index } => write!(f, "tangent is lightlike at sample {index}"),
            Error::FrameDegenerate { index, reason } => write!(f, "degenerate frame at sample {index}: {reason}"),
            Error::DivisionDegenerate { what, indices } => {
                let shown: Vec<_> = indices.iter().take(8).collect();
                write!(f, "{what}: denominator below guard at {} point(s), first {:?}", indices.len(), shown)
            }
        }
    }
}
