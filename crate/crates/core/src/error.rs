use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Lengths, dimensions or index ranges that do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    /// An operation was handed a torus-mode vector where a sphere-mode one
    /// was required, or vice versa.
    #[error("mode error: {0}")]
    Mode(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A parameter outside the range where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation failed at ({x}, {y}): {reason}")]
    Evaluation { x: f64, y: f64, reason: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("infeasible candidate: residual {residual:.6e} exceeds radius {radius:.6e}")]
    Infeasible { residual: f64, radius: f64 },

    #[error("ill-conditioned barrier system at barrier parameter {barrier:.3e}: {reason}")]
    IllConditioned { barrier: f64, reason: String },

    #[error("sample size {requested} exceeds the configured limit {limit}")]
    SampleBudget { requested: u64, limit: u64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
