use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("target `{target}` failed: {reason}")]
    TargetFailure { target: String, reason: String },
    #[error("grid for `{variable}` has {len} point(s); at least 3 are required")]
    GridTooSmall { variable: String, len: usize },
    #[error("grid for `{variable}` has an even number of points ({len})")]
    EvenGrid { variable: String, len: usize },
    #[error("grid for `{variable}` is not strictly increasing")]
    NonIncreasingGrid { variable: String },
    #[error("invalid grid spec `{spec}`: {reason}")]
    BadGridSpec { spec: String, reason: String },
    #[error("no grid given for variable `{0}`")]
    MissingGrid(String),
    #[error("no fixed value given for variable `{0}`")]
    MissingFixed(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("interaction detection needs at least two variables (target has {0})")]
    InsufficientArity(usize),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] qseg_core::Error),
}

pub type Result<T> = std::result::Result<T, ProfileError>;
