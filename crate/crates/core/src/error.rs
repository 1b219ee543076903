use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("parameter {value} outside [0, 1]")]
    ParameterOutOfRange { value: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("cost map returned NaN at {point:?}")]
    NanCost { point: Vec<f64> },

    #[error("broken parent chain: {0}")]
    BrokenParentChain(String),

    #[error("scenario parse error in field `{field}`: {message}")]
    Parse { field: String, message: String },

    #[error("scenario validation error: {0}")]
    Validation(String),

    #[error("unknown cost map kind `{0}`")]
    UnknownKind(String),
}
