use crate::term::Iri;

/// Errors produced while parsing, serializing or extracting RDF content.
#[derive(Debug, Clone, thiserror::Error)]
pub enum RdfError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("blank node {node} used as {role} identifier; items need stable IRIs")]
    BlankNodeEntity { node: String, role: &'static str },

    #[error("subclass hierarchy contains a cycle: {}", witness.iter().map(|i| i.as_str()).collect::<Vec<_>>().join(" -> "))]
    HierarchyCycle { witness: Vec<Iri> },

    #[error("cannot serialize IRI <{0}> as an XML element name")]
    UnserializableIri(Iri),
}

impl RdfError {
    pub fn syntax(line: usize, column: usize, message: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}
