use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scheme mismatch: {left} vs {right}")]
    SchemeMismatch { left: String, right: String },

    #[error("generator {name} is not declared in {scheme}")]
    UnknownGenerator { name: String, scheme: String },

    #[error("generator {name} has no differential partner in {scheme}")]
    MissingDifferential { name: String, scheme: String },

    #[error("polynomial is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("degree mismatch: {0}")]
    Degree(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("3-form is not closed: d(kappa) = {residual}")]
    NotClosed { residual: String },

    #[error("series did not terminate within {cap} steps")]
    SeriesCap { cap: usize },

    #[error("{what} = {value} exceeds the cap {cap}")]
    Cap { what: String, value: usize, cap: usize },

    #[error("extraction failed: {0}")]
    Extraction(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
