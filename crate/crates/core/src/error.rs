use thiserror::Error;

/// Errors raised by model construction, evaluation and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate nodes: repeated x value {x}")]
    DegenerateNodes { x: f64 },
    #[error("too many nodes for general interpolation: {n} (limit {limit})")]
    TooManyNodes { n: usize, limit: usize },
    #[error("series has an even number of points ({len}); piecewise models need 2m+1 points")]
    EvenSeries { len: usize },
    #[error("series has {len} points; at least {min} required")]
    TooFewPoints { len: usize, min: usize },
    #[error("x values must be strictly increasing (violation at index {index})")]
    NonMonotonicX { index: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("x = {x} lies outside the model domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("no root of the average-value equation lies inside ({lo}, {hi})")]
    NoRootInRange { lo: f64, hi: f64 },
    #[error("reference and model integrals differ in sign ({reference} vs {model})")]
    SignMismatch { reference: f64, model: f64 },
    #[error("aggregate integral too close to zero ({value})")]
    ZeroIntegral { value: f64 },
    #[error("candidate `{class}` is constant over the grid")]
    DegenerateDesign { class: String },
    #[error("candidate `{class}` has only {usable} usable points")]
    InsufficientPoints { class: String, usable: usize },
    #[error("classification needs at least 2 candidates, got {0}")]
    TooFewCandidates(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
