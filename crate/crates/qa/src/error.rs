use thiserror::Error;

#[derive(Debug, Error)]
pub enum QaError {
    /// The endpoint failed while answering a check's query. The check
    /// name is carried so reports can say which check was cut short.
    #[error("check {check}: endpoint failure: {message}")]
    Endpoint { check: String, message: String },
}
