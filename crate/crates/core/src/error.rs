use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("expected dimension {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("non-finite coordinate")]
    NonFinite,

    #[error("degenerate hull: {0}")]
    DegenerateHull(String),

    #[error("dataset is empty after removing conflicting points")]
    EmptyDataset,

    #[error("positive class has no points")]
    EmptyPositiveClass,

    #[error("domain bound must be positive and finite, got {0}")]
    InvalidBound(f64),

    #[error("cut has a zero weight vector")]
    ZeroWeight,

    #[error("regions are not nested: {0}")]
    NotNested(String),

    #[error("regions do not alternate classes: {0}")]
    NotAlternating(String),

    #[error("peeling made no progress at level {0}")]
    NoProgress(usize),

    #[error("|x~| = {norm} exceeds domain bound {bound}")]
    DomainBoundExceeded { norm: f64, bound: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },

    #[error("line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("line {line}: unknown label {label:?}")]
    UnknownLabel { line: u64, label: String },

    #[error("empty file")]
    EmptyFile,

    #[error("schema error at `{path}`: {msg}")]
    Schema { path: String, msg: String },

    #[error("unsupported format_version {0}")]
    Version(i64),

    #[error("network has no stored hulls")]
    MissingHulls,

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in machine-readable CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyInput => "EmptyInput",
            Error::Dimension { .. } => "DimensionError",
            Error::NonFinite => "NonFinite",
            Error::DegenerateHull(_) => "DegenerateHull",
            Error::EmptyDataset => "EmptyClass",
            Error::EmptyPositiveClass => "EmptyPositiveClass",
            Error::InvalidBound(_) => "InvalidBound",
            Error::ZeroWeight => "ZeroWeight",
            Error::NotNested(_) => "NotNested",
            Error::NotAlternating(_) => "NotAlternating",
            Error::NoProgress(_) => "NoProgress",
            Error::DomainBoundExceeded { .. } => "DomainBoundExceeded",
            Error::Parse { .. } => "ParseError",
            Error::RaggedRow { .. } => "RaggedRow",
            Error::UnknownLabel { .. } => "UnknownLabel",
            Error::EmptyFile => "EmptyFile",
            Error::Schema { .. } => "SchemaError",
            Error::Version(_) => "VersionError",
            Error::MissingHulls => "MissingHulls",
            Error::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
