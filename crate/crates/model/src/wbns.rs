//! Namespaces for the RDF face of a Wikibase instance.
//!
//! The embedded server exports its store as triples in these namespaces,
//! and the statistics module recognizes them when categorizing predicates.

use owlbase_rdf::Iri;

use crate::ids::{EntityId, PropertyId};

/// Entity namespace; `wd:Q1` style subjects.
pub const WD: &str = "http://wikibase.example/entity/";
/// Direct-claim predicate namespace; `wdt:P1` style predicates.
pub const WDT: &str = "http://wikibase.example/prop/direct/";
/// The Wikibase system ontology.
pub const WIKIBASE: &str = "http://wikiba.se/ontology#";
/// The schema.org namespace used by entity metadata triples.
pub const SCHEMA_NS: &str = "http://schema.org/";
/// Used for entity descriptions in RDF exports.
pub const SCHEMA_DESCRIPTION: &str = "http://schema.org/description";
/// Modification timestamp metadata in RDF exports.
pub const SCHEMA_DATE_MODIFIED: &str = "http://schema.org/dateModified";
/// Revision counter metadata in RDF exports.
pub const SCHEMA_VERSION: &str = "http://schema.org/version";
/// Used for aliases in RDF exports.
pub const SKOS_ALT_LABEL: &str = "http://www.w3.org/2004/02/skos/core#altLabel";

pub fn entity_iri(id: EntityId) -> Iri {
    Iri::new(format!("{WD}{id}")).expect("entity iri is well formed")
}

pub fn property_entity_iri(id: PropertyId) -> Iri {
    Iri::new(format!("{WD}{id}")).expect("property iri is well formed")
}

pub fn direct_claim_iri(id: PropertyId) -> Iri {
    Iri::new(format!("{WDT}{id}")).expect("direct claim iri is well formed")
}

pub fn wikibase_term(local: &str) -> Iri {
    Iri::new(format!("{WIKIBASE}{local}")).expect("wikibase term is well formed")
}

/// Parse `wd:` IRIs back to ids; used by SPARQL result handling and export
/// round trips.
pub fn entity_id_of(iri: &Iri) -> Option<EntityId> {
    iri.as_str().strip_prefix(WD)?.parse().ok()
}

pub fn property_id_of_direct(iri: &Iri) -> Option<PropertyId> {
    iri.as_str().strip_prefix(WDT)?.parse().ok()
}

pub fn property_id_of_entity(iri: &Iri) -> Option<PropertyId> {
    iri.as_str().strip_prefix(WD)?.parse().ok()
}
