use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite numeric value {0}")]
    NonFinite(f64),

    #[error("unknown category label {0:?}")]
    UnknownCategory(String),

    #[error("expected a {expected} value, got {got}")]
    TypeMismatch {
        expected: &'static str,
        got: String,
    },

    #[error("invalid summary spec: {0}")]
    InvalidSpec(String),

    #[error("cannot merge {left} with {right}: {reason}")]
    Incompatible {
        left: String,
        right: String,
        reason: String,
    },

    #[error("merge_all needs at least one summary")]
    EmptyMerge,

    #[error("{0} is undefined for an empty summary")]
    EmptySummary(&'static str),

    #[error("moment order {requested} out of range 2..={max}")]
    MomentOrder { requested: usize, max: usize },

    #[error("implied frequency {value} at cell {index} is not an integer")]
    NonIntegralFrequency { index: usize, value: f64 },

    #[error("reference set of unit ids needs observations with unit ids")]
    UnitIdsRequired,

    #[error("summary invariant violated: {0}")]
    Invariant(String),

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("search bounds exceeded: {0}")]
    BoundsExceeded(String),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("row {row}, column {column:?}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("duplicate unit id {0}")]
    DuplicateUnit(u64),

    #[error("partitions overlap: {0}")]
    Overlap(String),

    #[error("invalid split: {0}")]
    Split(String),

    #[error("unsupported format version {0}")]
    Version(u64),

    #[error("malformed summary file: {0}")]
    Malformed(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Malformed(e.to_string())
    }
}
