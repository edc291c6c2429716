use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: x must be strictly increasing")]
    NonMonotonicX { line: u64 },
    #[error("series file has no data rows")]
    Empty,
    #[error("unsupported document format version {found} (this build reads {supported}.x)")]
    UnsupportedVersion { found: String, supported: u64 },
    #[error("malformed document: {0}")]
    Document(String),
    #[error(transparent)]
    Model(#[from] qseg_core::Error),
    #[error(transparent)]
    Profile(#[from] qseg_profiler::ProfileError),
}

pub type Result<T> = std::result::Result<T, ReportError>;

pub(crate) fn io_error(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> ReportError + '_ {
    move |source| ReportError::Io {
        path: path.to_path_buf(),
        source,
    }
}
