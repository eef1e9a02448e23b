use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QamError {
    /// A value fell outside an interval or the range of a generator.
    #[error("range error: {0}")]
    Range(String),
    /// Invalid argument or configuration.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// `x` and `z` of a Pales triple (or `z` and the mean) coincide.
    #[error("degenerate point: {0}")]
    DegeneratePoint(String),
    /// `f'` vanishes where `f''/f'` is requested.
    #[error("vanishing derivative at x = {0}")]
    VanishingDerivative(f64),
    /// A function produced a non-finite value.
    #[error("evaluation error: {0}")]
    Evaluation(String),
    /// Malformed text input.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QamError>;
