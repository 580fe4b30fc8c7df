use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A configured resource cap was exceeded. Never silently downgraded.
    #[error("resource limit exceeded: {what} ({actual} > cap {cap})")]
    ResourceLimit {
        what: &'static str,
        cap: u64,
        actual: u64,
    },

    /// Input outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An element of ℚ* that does not factor over the configured prime set.
    #[error("{value} is outside the S-unit model (prime {prime} not in S)")]
    OutOfModel { value: String, prime: String },

    /// Two objects that must share a presentation, group, or degree do not.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// A map that fails its well-definedness or homomorphism check.
    #[error("ill-defined map: {0}")]
    IllDefined(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::ResourceLimit { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
