use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("conditional is undefined: {0}")]
    UndefinedConditional(String),
    #[error("invalid expression: {0}")]
    InvalidExpression(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("unknown region `{0}`")]
    UnknownRegion(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("lp solver failure: {0}")]
    Solver(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
