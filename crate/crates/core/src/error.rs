use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid pants graph: {0}")]
    Graph(String),

    #[error("mesh error: {0}")]
    Mesh(String),

    #[error("solver error: {0}")]
    Solver(String),

    #[error("volume budget exceeded: 3g+n-3 = {needed} > {budget}")]
    Budget { needed: usize, budget: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LabError::Domain(msg.into()))
}
