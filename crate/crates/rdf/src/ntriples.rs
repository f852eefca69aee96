//! N-Triples reading and writing.
//!
//! The writer has a canonical mode (one sorted line per triple) used
//! wherever two graphs are compared byte for byte.

use std::fmt::Write as _;

use crate::document::OntologyDocument;
use crate::error::RdfError;
use crate::term::{Literal, Node, Term, Triple};
use crate::turtle::{escape_iri, escape_string};
use crate::vocab;

/// Render triples one per line in lexicographic order. Two documents with
/// the same triples produce identical output.
pub fn write_canonical(doc: &OntologyDocument) -> String {
    let mut lines: Vec<String> = doc.triples().map(triple_line).collect();
    lines.sort();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn triple_line(triple: &Triple) -> String {
    format!(
        "{} <{}> {} .",
        node_text(&triple.subject),
        escape_iri(triple.predicate.as_str()),
        term_text(&triple.object)
    )
}

pub fn node_text(node: &Node) -> String {
    match node {
        Node::Iri(iri) => format!("<{}>", escape_iri(iri.as_str())),
        Node::Blank(id) => format!("_:{id}"),
    }
}

pub fn term_text(term: &Term) -> String {
    match term {
        Term::Iri(iri) => format!("<{}>", escape_iri(iri.as_str())),
        Term::Blank(id) => format!("_:{id}"),
        Term::Literal(lit) => literal_text(lit),
    }
}

fn literal_text(lit: &Literal) -> String {
    let mut out = format!("\"{}\"", escape_string(lit.lexical()));
    if let Some(lang) = lit.language() {
        let _ = write!(out, "@{lang}");
    } else if *lit.datatype() != vocab::xsd::string() {
        let _ = write!(out, "^^<{}>", escape_iri(lit.datatype().as_str()));
    }
    out
}

/// Parse N-Triples text. Since every N-Triples document is also Turtle,
/// this simply delegates to the Turtle parser.
pub fn parse(text: &str) -> Result<OntologyDocument, RdfError> {
    crate::turtle::parse(text)
}
