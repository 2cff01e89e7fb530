use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("degenerate Young function: {0}")]
    Degenerate(String),
    #[error("table is not monotone: {0}")]
    NonMonotoneTable(String),
    #[error("table read failed: {0}")]
    Table(String),
    #[error("condition {condition} failed: {detail}")]
    ConditionFailed { condition: &'static str, detail: String },
    #[error("glue failed: {0}")]
    GlueFailed(String),
    #[error("invalid problem: {0}")]
    InvalidProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Table(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Table(e.to_string())
    }
}
