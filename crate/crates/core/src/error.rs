use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {value} is outside [0, 1] ({context})")]
    Domain { value: String, context: String },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("table is not normal: maximum entry is {max}, expected 1")]
    Normality { max: String },

    #[error("groups are not disjoint: {0}")]
    Disjointness(String),

    #[error("axiom {axiom} expects {expected} groups, got {got}")]
    Arity {
        axiom: String,
        expected: usize,
        got: usize,
    },

    #[error("schema has {vars} variables, scan limit is {limit}")]
    Limit { vars: usize, limit: usize },

    #[error("graph error: {0}")]
    Graph(String),

    #[error("t-norm error: {0}")]
    TNorm(String),

    #[error("exact arithmetic cannot evaluate {0}")]
    Inexact(String),

    #[error("table is not crisp: entry {value} at {at}")]
    Crispness { value: String, at: String },

    #[error("table is not strictly positive: zero entry at {at}")]
    Positivity { at: String },

    #[error("unsupported t-norm: {0}")]
    UnsupportedTNorm(String),

    #[error("factor cliques do not cover variable {0}")]
    Coverage(String),

    #[error("factor cliques do not match the graph cliques: {0}")]
    CliqueMismatch(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn schema(msg: impl Into<String>) -> Self {
        Error::Schema(msg.into())
    }

    pub(crate) fn graph(msg: impl Into<String>) -> Self {
        Error::Graph(msg.into())
    }
}
