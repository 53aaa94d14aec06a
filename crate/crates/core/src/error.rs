use std::fmt;

/// Errors raised by the slug-design routines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A concentration, mobility ratio or count lies outside the admissible domain.
    Domain(String),
    /// Concentrations are not strictly decreasing (or `c_lo >= c_hi`).
    Ordering(String),
    /// `mean_mobility` was asked for a zero-width interval.
    DegenerateInterval {
        at: f64,
    },
    /// Vectors whose lengths must agree do not.
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    /// The single-slug baseline volume used for a gain is not positive.
    DegenerateBaseline(f64),
    /// A user-supplied function returned a non-finite value.
    Evaluation(String),
    /// A model definition breaks its structural invariants.
    Validation(String),
    /// A scenario or table file could not be read or parsed.
    Parse(String),
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Domain(msg) => write!(f, "domain error: {msg}"),
            Self::Ordering(msg) => write!(f, "ordering error: {msg}"),
            Self::DegenerateInterval { at } => {
                write!(
                    f,
                    "degenerate interval at c = {at}; use the point mobility instead"
                )
            }
            Self::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Self::DegenerateBaseline(v) => write!(f, "baseline volume must be positive, got {v}"),
            Self::Evaluation(msg) => write!(f, "evaluation error: {msg}"),
            Self::Validation(msg) => write!(f, "validation error: {msg}"),
            Self::Parse(msg) => write!(f, "parse error: {msg}"),
            Self::Io(msg) => write!(f, "I/O error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
