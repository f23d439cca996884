use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: unknown event `{label}`")]
    UnknownEvent { line: usize, label: String },

    #[error("line {line}: duplicate event label `{label}`")]
    DuplicateLabel { line: usize, label: String },

    #[error("line {line}: self-edge on `{label}` is not allowed")]
    SelfEdge { line: usize, label: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("{what} cap exceeded: limit {limit}")]
    CapExceeded { what: &'static str, limit: usize },

    #[error("endpoint mismatch: {0}")]
    EndpointMismatch(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),

    #[error("object not in view: {0}")]
    NotInView(String),

    #[error("view is not exhaustive: {0}")]
    NotExhaustive(String),

    #[error("operation needs a {0}-mode view")]
    WrongMode(&'static str),

    #[error("ill-typed profunctor action: {0}")]
    IllTyped(String),
}

impl Error {
    pub fn is_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
