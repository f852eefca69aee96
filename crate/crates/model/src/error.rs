//! Errors raised while loading the mapping dictionary or building drafts.

use owlbase_rdf::Iri;
use thiserror::Error;

use crate::dict::Datatype;
use crate::ids::PropertyId;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MapError {
    #[error("malformed identifier '{raw}': expected a letter followed by a positive integer")]
    MalformedId { raw: String },

    #[error("mapping file is not valid: {0}")]
    InvalidDictionary(String),

    #[error("ontology property <{iri}> is mapped twice")]
    DuplicateOntologyIri { iri: Iri },

    #[error(
        "property {property} is targeted with conflicting datatypes {existing} and {conflicting}"
    )]
    DuplicateTarget {
        property: PropertyId,
        existing: Datatype,
        conflicting: Datatype,
    },

    #[error("mapping dictionary lacks the structural property \"{name}\"")]
    MissingStructural { name: &'static str },

    #[error("ontology property <{iri}> has no mapping dictionary entry")]
    UnmappedProperty { iri: Iri },

    #[error("value '{value}' cannot inhabit datatype {datatype} of property {property}")]
    DatatypeMismatch {
        property: PropertyId,
        datatype: Datatype,
        value: String,
    },

    #[error("claim references <{iri}> which has not been resolved to an entity id")]
    UnresolvedReference { iri: Iri },
}
