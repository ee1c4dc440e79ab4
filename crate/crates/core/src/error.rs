use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Config => 2,
            ErrorKind::Data => 3,
            ErrorKind::Numeric => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown level `{level}` for variable `{variable}`")]
    UnknownLevel { variable: String, level: String },
    #[error("category code {code} out of range for {categories} categories")]
    CodeOutOfRange { code: usize, categories: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("dimension mismatch: expected {expected} categories, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(
        "Dirichlet parameter for category {category} is zero (prior mean and count are both 0); \
         use a strictly positive prior mean for every category"
    )]
    ZeroAlpha { category: usize },
    #[error("{path}: line {line}: {message}")]
    SuiteFormat { path: String, line: u64, message: String },
    #[error("{0}: no scenario rows")]
    NoScenarioRows(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("numeric failure: {0}")]
    NumericFailure(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidDomain(_)
            | Error::UnknownVariable(_)
            | Error::UnknownLevel { .. }
            | Error::InvalidModel(_)
            | Error::InvalidProbability(_)
            | Error::InvalidArgument(_)
            | Error::Config { .. } => ErrorKind::Config,
            Error::CodeOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::ZeroAlpha { .. }
            | Error::SuiteFormat { .. }
            | Error::NoScenarioRows(_)
            | Error::Io { .. } => ErrorKind::Data,
            Error::NumericFailure(_) => ErrorKind::Numeric,
        }
    }

    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { field: field.into(), message: message.into() }
    }
}
