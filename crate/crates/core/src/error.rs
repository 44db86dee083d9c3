use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown class label `{0}`")]
    UnknownClass(String),

    #[error("classes declared but absent from labels: {}", .0.join(", "))]
    MissingClasses(Vec<String>),

    #[error("duplicate class label `{0}` in class list")]
    DuplicateClass(String),

    #[error("non-finite feature value at row {row}, column {col}")]
    NonFinite { row: usize, col: usize },

    #[error("feature dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate binary target: {0}")]
    DegenerateTarget(String),

    #[error("classifier returned invalid probability {value} for row {row}")]
    InvalidProbability { row: usize, value: f64 },

    #[error("classifier does not provide probabilities")]
    ProbabilitiesUnavailable,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column `{column}`: {message}")]
    Parse {
        line: usize,
        column: String,
        message: String,
    },

    #[error("missing column `{0}`")]
    MissingColumn(String),

    #[error("label `{0}` is not covered by the binning spec")]
    Uncovered(String),

    #[error("undefined correlation: {0}")]
    UndefinedCorrelation(String),

    #[error("degenerate evaluation set: {0}")]
    DegenerateEvaluation(String),

    #[error("model document: {0}")]
    Format(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 usage/config, 3 data, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) | Error::MissingColumn(_) => 2,
            Error::UndefinedCorrelation(_)
            | Error::DegenerateEvaluation(_)
            | Error::InvalidProbability { .. }
            | Error::ProbabilitiesUnavailable => 4,
            _ => 3,
        }
    }
}
