use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("not exact: {0}")]
    NotExact(String),
    #[error("skew form mismatch")]
    FormMismatch,
    #[error("non-invertible factor: {0}")]
    NonInvertibleFactor(String),
    #[error("outside D-chart: {0}")]
    OutsideDChart(String),
    #[error("X-coordinate change failed: {0}")]
    XCoordinateChange(String),
    #[error("g-vector extraction failed: {0}")]
    GVectorExtraction(String),
    #[error("peel failure: {0}")]
    PeelFailure(String),
    #[error("bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("zero element has no leading term")]
    ZeroElement,
    #[error("invalid lamination: {0}")]
    InvalidLamination(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
