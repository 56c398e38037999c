use thiserror::Error;

/// Every failure the engine can report. Variants are grouped by how a
/// caller is expected to react: input problems, budget exhaustion (raise a
/// limit and retry), and genuine mathematical or internal failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid scalar: {0}")]
    InvalidScalar(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("series error: {0}")]
    Series(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid datum: violated invariant `{invariant}`: {detail}")]
    Datum {
        invariant: &'static str,
        detail: String,
    },

    #[error("unknown index `{0}`")]
    UnknownIndex(String),

    #[error("budget exceeded: {what} (needs {needed}, limit {limit})")]
    Budget {
        what: String,
        needed: usize,
        limit: usize,
    },

    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error("inconclusive: {what} (required depth {required})")]
    Inconclusive { what: String, required: usize },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn budget(what: impl Into<String>, needed: usize, limit: usize) -> Self {
        Error::Budget {
            what: what.into(),
            needed,
            limit,
        }
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Budget exhaustion and inconclusive searches are not refutations.
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::Inconclusive { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
