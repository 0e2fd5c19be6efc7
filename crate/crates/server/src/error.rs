use boardkit_core::{Diagnostic, Rejection};

#[derive(Debug, thiserror::Error)]
pub enum ServerError {
    #[error("not found: {0}")]
    NotFound(String),
    #[error("rejected: {}", .0.reason)]
    Rejected(Rejection),
    #[error("missing or wrong editor token")]
    Unauthorized,
    #[error("invalid definition ({} diagnostics)", .0.len())]
    Invalid(Vec<Diagnostic>),
    #[error("bad request: {0}")]
    BadRequest(String),
    #[error("storage failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt snapshot: {0}")]
    Corrupt(String),
}

impl ServerError {
    pub fn rejected(code: &str, reason: impl Into<String>) -> Self {
        Self::Rejected(Rejection::new(code, reason))
    }

    /// Stable machine-readable code for error bodies.
    pub fn code(&self) -> &str {
        match self {
            Self::NotFound(_) => "NOT_FOUND",
            Self::Rejected(r) => &r.code,
            Self::Unauthorized => "UNAUTHORIZED",
            Self::Invalid(_) => "INVALID_DEFINITION",
            Self::BadRequest(_) => "BAD_REQUEST",
            Self::Io(_) => "IO_ERROR",
            Self::Corrupt(_) => "CORRUPT_SNAPSHOT",
        }
    }

    pub fn reason(&self) -> String {
        match self {
            Self::Rejected(r) => r.reason.clone(),
            other => other.to_string(),
        }
    }
}
