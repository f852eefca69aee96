//! RDF triple model and ontology access for the owlbase pipeline.
//!
//! This crate parses Turtle (and a pragmatic subset of RDF/XML) into an
//! in-memory [`OntologyDocument`], extracts the schema-level structures
//! (classes, properties, individuals) that the ingestion pipeline consumes,
//! and serializes documents back out as Turtle or N-Triples.

pub mod document;
pub mod error;
pub mod extract;
pub mod ntriples;
pub mod order;
pub mod rdfxml;
pub mod term;
pub mod turtle;
pub mod vocab;

pub use document::{isomorphic, OntologyDocument};
pub use error::RdfError;
pub use extract::{
    extract_individuals, extract_schema, AnnotationRouting, ClassDef, IndividualDef,
    IndividualExtraction, PropertyDef, PropertyKind,
};
pub use order::class_import_order;
pub use term::{Iri, Literal, Node, Term, Triple};

/// Input serialization formats understood by [`parse_ontology`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Turtle,
    RdfXml,
}

impl Format {
    /// Guess the format from a file extension, defaulting to Turtle.
    pub fn from_extension(ext: &str) -> Format {
        match ext.to_ascii_lowercase().as_str() {
            "owl" | "rdf" | "xml" => Format::RdfXml,
            _ => Format::Turtle,
        }
    }
}

/// Parse a complete ontology document from UTF-8 bytes.
pub fn parse_ontology(content: &[u8], format: Format) -> Result<OntologyDocument, RdfError> {
    let text = std::str::from_utf8(content).map_err(|e| RdfError::Syntax {
        line: 1,
        column: 1,
        message: format!("input is not valid UTF-8: {e}"),
    })?;
    match format {
        Format::Turtle => turtle::parse(text),
        Format::RdfXml => rdfxml::parse(text),
    }
}

/// Serialize a document in the given format; the output re-parses to an
/// equal triple set (up to blank node relabeling).
pub fn serialize_ontology(doc: &OntologyDocument, format: Format) -> Result<String, RdfError> {
    match format {
        Format::Turtle => Ok(turtle::write(doc)),
        Format::RdfXml => rdfxml::write(doc),
    }
}
