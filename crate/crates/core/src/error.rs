use std::fmt;

/// Which singular vector a solver step was updating when it failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    U,
    V,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::U => write!(f, "u"),
            Axis::V => write!(f, "v"),
        }
    }
}

/// Error type shared by validation, parsing, and the solvers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two lengths that must agree do not.
    #[error("dimension mismatch for {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// A penalty half-step produced the all-zero vector, so the iterate
    /// cannot be normalized. Usually means the penalty level is too
    /// aggressive for the data.
    #[error("degenerate solution: {axis}-update produced the zero vector under penalty {penalty}")]
    Degenerate { axis: Axis, penalty: String },

    /// A data file could not be parsed; `line` is 1-based.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// An error raised while fitting factor `index` of a deflation run.
    #[error("factor {index}: {source}")]
    Factor {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for the degenerate-solution case, possibly wrapped by a
    /// deflation factor index.
    pub fn is_degenerate(&self) -> bool {
        match self {
            Error::Degenerate { .. } => true,
            Error::Factor { source, .. } => source.is_degenerate(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
