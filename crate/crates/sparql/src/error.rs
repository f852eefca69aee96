use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SparqlError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported construct: {construct}")]
    Unsupported { construct: String },
    #[error("malformed results document: {0}")]
    MalformedResults(String),
}

impl SparqlError {
    pub fn parse(line: usize, column: usize, message: impl Into<String>) -> SparqlError {
        SparqlError::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
