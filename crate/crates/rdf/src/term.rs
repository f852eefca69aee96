//! RDF terms: IRIs, blank nodes, literals and triples.

use std::fmt;

use crate::vocab;

/// An absolute IRI. Two IRIs are equal iff their strings are byte-equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    /// Construct an IRI, requiring a scheme separator.
    pub fn new(value: impl Into<String>) -> Result<Iri, String> {
        let value = value.into();
        if value.is_empty() {
            return Err("IRI must be non-empty".to_string());
        }
        if !value.contains(':') {
            return Err(format!("IRI '{value}' has no scheme separator"));
        }
        Ok(Iri(value))
    }

    /// Construct from a string known to be an absolute IRI.
    /// Panics on invalid input; reserve for compile-time constants.
    pub fn from_static(value: &str) -> Iri {
        Iri::new(value).expect("static IRI must be valid")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }

    /// True when the IRI lives in the RDF/RDFS/OWL/XSD structural vocabulary.
    pub fn is_structural_vocab(&self) -> bool {
        vocab::STRUCTURAL_NAMESPACES
            .iter()
            .any(|ns| self.0.starts_with(ns))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for Iri {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

/// An RDF literal. `language` is present iff the datatype is `rdf:langString`;
/// plain literals normalize to `xsd:string`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    /// A plain string literal (`xsd:string`).
    pub fn string(lexical: impl Into<String>) -> Literal {
        Literal {
            lexical: lexical.into(),
            datatype: vocab::xsd::string(),
            language: None,
        }
    }

    /// A language-tagged string (`rdf:langString`). Tags are lowercased.
    pub fn lang(lexical: impl Into<String>, language: impl Into<String>) -> Literal {
        Literal {
            lexical: lexical.into(),
            datatype: vocab::rdf::lang_string(),
            language: Some(language.into().to_ascii_lowercase()),
        }
    }

    /// A typed literal. A langString datatype without a tag is rejected.
    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Result<Literal, String> {
        if datatype == vocab::rdf::lang_string() {
            return Err("rdf:langString literals need a language tag".to_string());
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// A subject-position term: IRI or blank node id.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    Iri(Iri),
    Blank(String),
}

impl Node {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Node::Iri(iri) => Some(iri),
            Node::Blank(_) => None,
        }
    }
}

impl From<Iri> for Node {
    fn from(iri: Iri) -> Node {
        Node::Iri(iri)
    }
}

/// An object-position term: IRI, blank node id, or literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn as_node(&self) -> Option<Node> {
        match self {
            Term::Iri(iri) => Some(Node::Iri(iri.clone())),
            Term::Blank(b) => Some(Node::Blank(b.clone())),
            Term::Literal(_) => None,
        }
    }
}

impl From<Node> for Term {
    fn from(node: Node) -> Term {
        match node {
            Node::Iri(iri) => Term::Iri(iri),
            Node::Blank(b) => Term::Blank(b),
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Term {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(lit: Literal) -> Term {
        Term::Literal(lit)
    }
}

/// A single RDF statement. The predicate is always an IRI.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub subject: Node,
    pub predicate: Iri,
    pub object: Term,
}

impl Triple {
    pub fn new(subject: impl Into<Node>, predicate: Iri, object: impl Into<Term>) -> Triple {
        Triple {
            subject: subject.into(),
            predicate,
            object: object.into(),
        }
    }
}
