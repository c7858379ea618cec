use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("integrity error: unresolved id `{id}` referenced by {context}")]
    Integrity { id: String, context: String },
    #[error("not found: {0}")]
    NotFound(String),
    #[error("{0}")]
    Domain(String),
    #[error("selection is missing required slot {slot}")]
    Dependency { slot: String },
    #[error("empty paradigm: {slot} has no candidates under `{class}`")]
    EmptyParadigm { slot: String, class: String },
    #[error("cannot realize `{lemma}`: missing form {form}")]
    Realization { lemma: String, form: String },
    #[error("vector file line {line}: {message}")]
    VectorParse { line: usize, message: String },
    #[error("lexical resource failure: {0}")]
    Resource(String),
    #[error("frame `{0}` has no verb compatible with the selected structure")]
    FrameIncomplete(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable code, used in API error bodies.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "parse",
            Error::Integrity { .. } => "integrity",
            Error::NotFound(_) => "not-found",
            Error::Domain(_) => "domain",
            Error::Dependency { .. } => "dependency",
            Error::EmptyParadigm { .. } => "empty-paradigm",
            Error::Realization { .. } => "realization",
            Error::VectorParse { .. } => "vector-parse",
            Error::Resource(_) => "resource",
            Error::FrameIncomplete(_) => "frame-incomplete",
            Error::Io(_) => "io",
        }
    }

    pub(crate) fn not_found(what: impl std::fmt::Display) -> Self {
        Error::NotFound(what.to_string())
    }
}
