use thiserror::Error;

/// Errors raised by constructions whose preconditions do not hold.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph is disconnected: vertex {0} is unreachable from the root")]
    Disconnected(usize),
    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),
    #[error("graph has {0} vertices, at least {1} required")]
    TooSmall(usize, usize),
    #[error("graph has {0} vertices, the cap is {1}")]
    TooLarge(usize, usize),
    #[error("root {0} is not on the outer face")]
    RootNotOnOuterFace(usize),
    #[error("not a cycle of the skeleton: {0}")]
    NotACycle(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal construction failure at {path}: {msg}")]
    Internal { path: String, msg: String },
    #[error("unsupported bound query: {0}")]
    Unsupported(String),
    #[error("contraction error: {0}")]
    Contraction(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
