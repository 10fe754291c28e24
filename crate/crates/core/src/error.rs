use std::fmt;

/// Errors surfaced by the library.
///
/// The three variants map onto the process exit codes used by the CLI:
/// domain and resource problems are validation failures (exit 2), while
/// `Numerical` marks a quadrature or series evaluation that could not
/// reach its requested tolerance (exit 3).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violates a precondition or a theorem hypothesis.
    Domain(String),
    /// A request exceeds the enumeration bounds of an exact algorithm.
    Resource(String),
    /// A numerical routine failed to converge; carries diagnostics.
    Numerical(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Resource(m) => write!(f, "resource error: {m}"),
            Error::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
