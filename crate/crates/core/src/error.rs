use kpoint_conic::ConicError;

#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex set {0} is not independent")]
    NotIndependent(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error("solver failed: {0}")]
    Solver(String),
    #[error(transparent)]
    Conic(#[from] ConicError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CoreError>;
