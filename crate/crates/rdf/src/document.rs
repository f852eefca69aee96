//! The parsed ontology document: a set of distinct triples plus the
//! prefix declarations captured during parsing.

use std::collections::{BTreeMap, BTreeSet};

use crate::term::{Iri, Node, Term, Triple};

/// A parsed RDF document. Duplicate statements collapse, so
/// `triple_count` equals the number of distinct `(s, p, o)` entries.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyDocument {
    triples: BTreeSet<Triple>,
    pub base_iri: Option<Iri>,
    pub prefix_map: BTreeMap<String, Iri>,
}

impl OntologyDocument {
    pub fn new() -> OntologyDocument {
        OntologyDocument::default()
    }

    pub fn insert(&mut self, triple: Triple) {
        self.triples.insert(triple);
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn triples(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    /// Distinct predicate IRIs used in the document.
    pub fn predicates(&self) -> BTreeSet<&Iri> {
        self.triples.iter().map(|t| &t.predicate).collect()
    }

    pub fn from_triples(triples: impl IntoIterator<Item = Triple>) -> OntologyDocument {
        OntologyDocument {
            triples: triples.into_iter().collect(),
            base_iri: None,
            prefix_map: BTreeMap::new(),
        }
    }
}

impl FromIterator<Triple> for OntologyDocument {
    fn from_iter<T: IntoIterator<Item = Triple>>(iter: T) -> OntologyDocument {
        OntologyDocument::from_triples(iter)
    }
}

/// Compare two documents as graphs, ignoring blank node names.
///
/// Ground triples must match exactly; blank nodes match if some bijection
/// between the two blank id sets maps one triple set onto the other. The
/// search backtracks over candidate pairings, pruned by each node's
/// incidence signature, which keeps it fast for the handful of blank
/// nodes ontology exports actually contain.
pub fn isomorphic(a: &OntologyDocument, b: &OntologyDocument) -> bool {
    if a.triple_count() != b.triple_count() {
        return false;
    }
    let blanks_a = blank_ids(a);
    let blanks_b = blank_ids(b);
    if blanks_a.len() != blanks_b.len() {
        return false;
    }
    if blanks_a.is_empty() {
        return a.triples == b.triples;
    }

    let sig_a: Vec<(String, BTreeMap<String, usize>)> = blanks_a
        .iter()
        .map(|id| (id.clone(), blank_signature(a, id)))
        .collect();
    let sig_b: BTreeMap<String, BTreeMap<String, usize>> = blanks_b
        .iter()
        .map(|id| (id.clone(), blank_signature(b, id)))
        .collect();

    let mut mapping: BTreeMap<String, String> = BTreeMap::new();
    let mut used: BTreeSet<String> = BTreeSet::new();
    assign(a, b, &sig_a, &sig_b, 0, &mut mapping, &mut used)
}

fn assign(
    a: &OntologyDocument,
    b: &OntologyDocument,
    sig_a: &[(String, BTreeMap<String, usize>)],
    sig_b: &BTreeMap<String, BTreeMap<String, usize>>,
    index: usize,
    mapping: &mut BTreeMap<String, String>,
    used: &mut BTreeSet<String>,
) -> bool {
    if index == sig_a.len() {
        let remapped: BTreeSet<Triple> = a.triples().map(|t| remap_triple(t, mapping)).collect();
        return remapped == b.triples;
    }
    let (id_a, sig) = &sig_a[index];
    for (id_b, candidate_sig) in sig_b {
        if used.contains(id_b) || candidate_sig != sig {
            continue;
        }
        mapping.insert(id_a.clone(), id_b.clone());
        used.insert(id_b.clone());
        if assign(a, b, sig_a, sig_b, index + 1, mapping, used) {
            return true;
        }
        mapping.remove(id_a);
        used.remove(id_b);
    }
    false
}

fn remap_triple(t: &Triple, mapping: &BTreeMap<String, String>) -> Triple {
    let subject = match &t.subject {
        Node::Blank(id) => Node::Blank(mapping.get(id).cloned().unwrap_or_else(|| id.clone())),
        other => other.clone(),
    };
    let object = match &t.object {
        Term::Blank(id) => Term::Blank(mapping.get(id).cloned().unwrap_or_else(|| id.clone())),
        other => other.clone(),
    };
    Triple {
        subject,
        predicate: t.predicate.clone(),
        object,
    }
}

fn blank_ids(doc: &OntologyDocument) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in doc.triples() {
        if let Node::Blank(id) = &t.subject {
            out.insert(id.clone());
        }
        if let Term::Blank(id) = &t.object {
            out.insert(id.clone());
        }
    }
    out
}

/// Count how the node is incident to its triples, with every blank node
/// collapsed to "_" so the signature is relabeling-invariant.
fn blank_signature(doc: &OntologyDocument, id: &str) -> BTreeMap<String, usize> {
    let mut sig: BTreeMap<String, usize> = BTreeMap::new();
    for t in doc.triples() {
        let subject_hit = matches!(&t.subject, Node::Blank(b) if b == id);
        let object_hit = matches!(&t.object, Term::Blank(b) if b == id);
        if subject_hit {
            let obj = match &t.object {
                Term::Blank(_) => "_".to_string(),
                Term::Iri(iri) => format!("<{iri}>"),
                Term::Literal(lit) => format!("{lit:?}"),
            };
            *sig.entry(format!("s {} {}", t.predicate, obj)).or_insert(0) += 1;
        }
        if object_hit {
            let subj = match &t.subject {
                Node::Blank(_) => "_".to_string(),
                Node::Iri(iri) => format!("<{iri}>"),
            };
            *sig.entry(format!("o {} {}", t.predicate, subj)).or_insert(0) += 1;
        }
    }
    sig
}
