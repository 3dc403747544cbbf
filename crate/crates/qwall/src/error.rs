use thiserror::Error;

/// Errors surfaced by the engines and the numerics underneath them.
#[derive(Debug, Error)]
pub enum QwallError {
    /// A physical-domain violation, e.g. the wall law reaching L <= 0.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid argument (wrong index range, empty input, ...).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A numerical routine failed to reach its declared tolerance.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A truncated sum whose estimated tail exceeds the declared budget.
    #[error("truncation error: {0}")]
    Truncation(String),

    /// Two supposedly-equal internal routes disagreed beyond tolerance.
    #[error("internal-consistency error: {0}")]
    Consistency(String),

    /// Root bracketing or refinement failed.
    #[error("root-search error: {0}")]
    RootSearch(String),

    /// Scenario/configuration validation failed before any computation.
    #[error("validation error: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, QwallError>;
