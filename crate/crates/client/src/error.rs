//! Error classification. Every way a request can go wrong maps to
//! exactly one `ApiErrorKind`, and the kind alone decides retriability.

use owlbase_model::PropertyId;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApiErrorKind {
    DatabaseLocked,
    FailedSave,
    Timeout,
    RateLimited,
    Permanent { code: String, message: String },
}

impl ApiErrorKind {
    pub fn retriable(&self) -> bool {
        !matches!(self, ApiErrorKind::Permanent { .. })
    }

    /// Map an API error payload to a kind. A failed save reported as a
    /// duplicate is permanent: retrying cannot resolve a conflict.
    pub fn classify(code: &str, info: &str) -> ApiErrorKind {
        match code {
            "db-lock" | "readonly" => ApiErrorKind::DatabaseLocked,
            "failed-save" if info.to_ascii_lowercase().contains("duplicate") => {
                ApiErrorKind::Permanent { code: code.to_owned(), message: info.to_owned() }
            }
            "failed-save" => ApiErrorKind::FailedSave,
            "timeout" => ApiErrorKind::Timeout,
            "ratelimited" | "maxlag" => ApiErrorKind::RateLimited,
            other => ApiErrorKind::Permanent { code: other.to_owned(), message: info.to_owned() },
        }
    }

    /// Fallback for responses with no readable error payload.
    pub fn from_status(status: u16, body_snippet: &str) -> ApiErrorKind {
        match status {
            408 | 504 => ApiErrorKind::Timeout,
            429 => ApiErrorKind::RateLimited,
            503 => ApiErrorKind::DatabaseLocked,
            other => ApiErrorKind::Permanent {
                code: format!("http-{other}"),
                message: body_snippet.to_owned(),
            },
        }
    }
}

impl std::fmt::Display for ApiErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ApiErrorKind::DatabaseLocked => write!(f, "database-locked"),
            ApiErrorKind::FailedSave => write!(f, "failed-save"),
            ApiErrorKind::Timeout => write!(f, "timeout"),
            ApiErrorKind::RateLimited => write!(f, "rate-limited"),
            ApiErrorKind::Permanent { code, message } => {
                write!(f, "permanent ({code}): {message}")
            }
        }
    }
}

/// A classified failure plus how many attempts were spent on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} after {attempts} attempt(s)")]
pub struct ApiError {
    pub kind: ApiErrorKind,
    pub attempts: u32,
}

impl ApiError {
    pub fn retriable(&self) -> bool {
        self.kind.retriable()
    }
}

#[derive(Debug, Error)]
pub enum WbError {
    #[error("invalid endpoint configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Api(#[from] ApiError),

    #[error("entity {id} not found")]
    NotFound { id: String },

    #[error("property {property} has datatype {found}, expected {expected}")]
    DatatypeMismatch { property: PropertyId, expected: String, found: String },

    #[error("property \"{name}\" ({hint}) is absent and property creation is disabled")]
    MissingProperty { name: String, hint: PropertyId },

    #[error("server created {assigned} but the dictionary maps {expected}; refusing to continue")]
    PropertyIdConflict { expected: PropertyId, assigned: PropertyId },

    #[error("query rejected: {0}")]
    MalformedQuery(String),

    #[error(transparent)]
    Draft(#[from] owlbase_model::MapError),
}
