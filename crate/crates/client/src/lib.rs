//! HTTP client for the Wikibase action-API subset and SPARQL endpoint.
//!
//! Failures are classified into a closed set of kinds; the kind alone
//! decides whether an operation is retried, and retries follow an
//! exponential backoff with jitter. Write requests are paced to the
//! configured rate limit.

pub mod client;
pub mod config;
pub mod error;
pub mod policy;

pub use client::{ExternalIdMatch, SparqlResults, WbClient};
pub use config::EndpointConfig;
pub use error::{ApiError, ApiErrorKind, WbError};
pub use policy::RetryPolicy;
