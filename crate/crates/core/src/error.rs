use thiserror::Error;

/// Library-wide error type. The CLI maps each variant onto an exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input, violated precondition, or unsupported request.
    #[error("{0}")]
    User(String),
    /// A construction exceeded its state or dimension cap.
    #[error("resource cap exceeded: {what} (cap {cap})")]
    Resource { what: String, cap: usize },
    /// An internal consistency check failed; this signals a bug.
    #[error("verification failed: {0}")]
    Verification(String),
}

impl Error {
    pub fn user(msg: impl Into<String>) -> Self {
        Error::User(msg.into())
    }

    pub fn resource(what: impl Into<String>, cap: usize) -> Self {
        Error::Resource { what: what.into(), cap }
    }

    pub fn verification(msg: impl Into<String>) -> Self {
        Error::Verification(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::User(_) => 2,
            Error::Resource { .. } => 3,
            Error::Verification(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::User(_) => "user",
            Error::Resource { .. } => "resource",
            Error::Verification(_) => "verification",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
