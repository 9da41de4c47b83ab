use thiserror::Error;

/// Errors raised by the numerical layers (model, sectors, engine, calibration).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// An input lies outside the domain where the operation is defined.
    #[error("domain error: {what}")]
    Domain { what: String },

    /// The bracket handed to the root finder does not straddle the target.
    #[error("no sign change on [{lo}, {hi}]: f(lo)-target = {f_lo}, f(hi)-target = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// Iteration budget exhausted; carries the best iterate seen.
    #[error("no convergence after {iterations} iterations (best x = {best}, residual = {residual})")]
    MaxIterations {
        iterations: usize,
        best: f64,
        residual: f64,
    },

    /// A calibration or disaggregation target cannot be reached with the given inputs.
    #[error("target unattainable: {what}")]
    Unattainable { what: String },
}

impl ModelError {
    pub(crate) fn domain(what: impl Into<String>) -> Self {
        ModelError::Domain { what: what.into() }
    }
}

pub type Result<T, E = ModelError> = std::result::Result<T, E>;

/// Errors raised while loading and validating a run configuration.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("invalid value for `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl ConfigError {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Errors raised while writing result files.
#[derive(Debug, Error)]
pub enum OutputError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Encode { path: String, message: String },
}
