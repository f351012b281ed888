use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    /// A value outside the domain of a potential or operator.
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "mollification radius {epsilon} is not resolvable on a grid with spacing {spacing} \
         (need 3*spacing <= epsilon <= 1)"
    )]
    Resolvability { epsilon: f64, spacing: f64 },

    #[error("numerical blow-up at t = {t} (dt = {dt})")]
    BlowUp { t: f64, dt: f64 },

    #[error("invalid input: {0}")]
    Input(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error(transparent)]
    Snapshot(#[from] SnapshotError),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Config text error with the 1-based line it was found on (0 when the
/// problem is not tied to a line, e.g. a missing key).
#[derive(Debug, Error, Clone, PartialEq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("bad magic: expected \"NSCH\"")]
    BadMagic,
    #[error("unsupported version {0}")]
    UnsupportedVersion(u32),
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    TruncatedPayload { expected: usize, found: usize },
    #[error("non-finite value in field {field} at index {index}")]
    NonFinitePayload { field: String, index: usize },
}

impl SnapshotError {
    /// Stable numeric code, one per failure kind.
    pub fn code(&self) -> u8 {
        match self {
            SnapshotError::BadMagic => 1,
            SnapshotError::UnsupportedVersion(_) => 2,
            SnapshotError::CorruptHeader(_) => 3,
            SnapshotError::TruncatedPayload { .. } => 4,
            SnapshotError::NonFinitePayload { .. } => 5,
        }
    }
}
