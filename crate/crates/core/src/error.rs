use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("polygon file {path}, line {line}: {message}")]
    PolygonFile {
        path: String,
        line: usize,
        message: String,
    },

    #[error("io error: {0}")]
    Io(String),

    #[error("factorization failed: {0}")]
    Factorization(String),

    #[error("unknown case `{given}`; valid ids are {valid}")]
    UnknownCase { given: String, valid: String },

    #[error("no reported architecture for {case} with {method}; pass an explicit configuration")]
    UnreportedArchitecture { case: String, method: String },

    #[error("point {0:?} lies outside the cell grid")]
    OutsideGrid(Vec<f64>),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            actual,
        })
    }
}
