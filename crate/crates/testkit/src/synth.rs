//! Seeded synthetic ontology generation.
//!
//! The generator produces an ontology the pipeline can ingest with the
//! default mapping dictionary, together with a summary of counts tallied
//! by construction. The summary gives verification code an expectation
//! that was not computed by the modules under test: the generator knows
//! a triple is a subclass link because it emitted one, not because it
//! categorized the predicate afterwards.
//!
//! Shape guarantees, relied on by the checks downstream:
//! - the class hierarchy is a tree (every class except the root has
//!   exactly one parent with a strictly smaller index), so it is acyclic
//!   and no class is an orphan;
//! - labels are unique across all entities and every entity has one;
//! - external identifier values are unique per property;
//! - source annotation values come from the recommended vocabulary.

use std::collections::BTreeSet;

use owlbase_model::SOURCE_VOCABULARY;
use owlbase_rdf::term::{Literal, Term, Triple};
use owlbase_rdf::{vocab, Iri, OntologyDocument};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SYNTH_NS: &str = "http://example.org/synth#";
const AERO_NS: &str = "http://example.org/aero#";

const OBJECT_PROPERTIES: [&str; 7] = [
    "hasProcess",
    "hasSoftware",
    "hasDataItem",
    "hasDataFormatSpecification",
    "hasDataModel",
    "mentions",
    "hasPart",
];

/// Counts and structures known by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSummary {
    pub classes: usize,
    pub individuals: usize,
    /// (child, parent) pairs of the class hierarchy.
    pub class_edges: BTreeSet<(Iri, Iri)>,
    /// Every class and individual IRI, the entities ingestion will create.
    pub entity_iris: BTreeSet<Iri>,
    pub triple_total: u64,
    pub domain_triples: u64,
    pub wikibase_triples: u64,
    pub other_triples: u64,
    pub instance_nodes: u64,
    pub class_nodes: u64,
    pub ambiguous_nodes: u64,
    pub internal_edges: u64,
    pub external_edges: u64,
    pub annotation_edges: u64,
    pub iri_nodes: u64,
    pub blank_nodes: u64,
    pub literal_nodes: u64,
    pub langstring_literals: u64,
    pub plain_literals: u64,
}

#[derive(Debug)]
pub struct SynthOntology {
    pub doc: OntologyDocument,
    pub summary: SynthSummary,
}

/// What a generated triple is, decided at emission time.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// Declarations against the structural vocabulary.
    Scaffold,
    Label,
    Subclass,
    Typing,
    ObjectLink,
    Alias,
    Source,
    ExternalId,
}

#[derive(Default)]
struct Tally {
    triples: BTreeSet<Triple>,
    domain: u64,
    other: u64,
    internal: u64,
    external: u64,
    annotation: u64,
    instance_sources: BTreeSet<Iri>,
    class_nodes: BTreeSet<Iri>,
    iris: BTreeSet<String>,
    lang_literals: BTreeSet<(String, String)>,
    plain_literals: BTreeSet<String>,
}

impl Tally {
    fn emit(&mut self, subject: &Iri, predicate: Iri, object: Term, kind: Kind) {
        let triple = Triple::new(subject.clone(), predicate, object.clone());
        if !self.triples.insert(triple) {
            return;
        }
        self.iris.insert(subject.as_str().to_owned());
        match &object {
            Term::Iri(iri) => {
                self.iris.insert(iri.as_str().to_owned());
            }
            Term::Literal(lit) => match lit.language() {
                Some(lang) => {
                    self.lang_literals
                        .insert((lit.lexical().to_owned(), lang.to_owned()));
                }
                None => {
                    self.plain_literals.insert(lit.lexical().to_owned());
                }
            },
            Term::Blank(_) => unreachable!("the generator never emits blank nodes"),
        }
        match kind {
            Kind::Scaffold | Kind::Label => self.other += 1,
            Kind::Subclass => {
                self.domain += 1;
                self.internal += 1;
                self.class_nodes.insert(subject.clone());
                if let Term::Iri(parent) = &object {
                    self.class_nodes.insert(parent.clone());
                }
            }
            Kind::Typing => {
                self.domain += 1;
                self.internal += 1;
                self.instance_sources.insert(subject.clone());
                if let Term::Iri(class) = &object {
                    self.class_nodes.insert(class.clone());
                }
            }
            Kind::ObjectLink => {
                self.domain += 1;
                self.internal += 1;
            }
            Kind::Alias | Kind::Source => {
                self.domain += 1;
                self.annotation += 1;
            }
            Kind::ExternalId => {
                self.domain += 1;
                self.external += 1;
            }
        }
    }
}

fn synth_iri(local: &str) -> Iri {
    Iri::new(format!("{SYNTH_NS}{local}")).expect("generated IRIs are well formed")
}

fn aero_iri(local: &str) -> Iri {
    Iri::new(format!("{AERO_NS}{local}")).expect("generated IRIs are well formed")
}

/// The spec-sized ontology behind the acceptance runs: 50 classes and
/// 500 individuals.
pub fn synth_ontology(seed: u64) -> SynthOntology {
    synth_ontology_sized(seed, 50, 500)
}

/// A synthetic ontology with chosen entity counts. `class_count` must be
/// at least one so individuals have something to instantiate.
pub fn synth_ontology_sized(
    seed: u64,
    class_count: usize,
    individual_count: usize,
) -> SynthOntology {
    assert!(class_count >= 1, "need at least one class");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = Tally::default();

    let declarations: Vec<(Iri, Iri, String)> = OBJECT_PROPERTIES
        .iter()
        .map(|local| (aero_iri(local), vocab::owl::object_property(), format!("{local} relation")))
        .chain([
            (aero_iri("alias"), vocab::owl::annotation_property(), "alias annotation".to_owned()),
            (aero_iri("source"), vocab::owl::annotation_property(), "source annotation".to_owned()),
            (aero_iri("wikidataUri"), vocab::owl::datatype_property(), "wikidata uri".to_owned()),
            (aero_iri("doi"), vocab::owl::datatype_property(), "doi".to_owned()),
        ])
        .collect();
    for (iri, declared_type, label) in &declarations {
        tally.emit(iri, vocab::rdf::type_(), Term::Iri(declared_type.clone()), Kind::Scaffold);
        tally.emit(
            iri,
            vocab::rdfs::label(),
            Term::Literal(Literal::lang(label, "en")),
            Kind::Label,
        );
    }

    let classes: Vec<Iri> = (0..class_count)
        .map(|i| synth_iri(&format!("class{i:04}")))
        .collect();
    let mut class_edges = BTreeSet::new();
    for (i, class) in classes.iter().enumerate() {
        tally.emit(class, vocab::rdf::type_(), Term::Iri(vocab::owl::class()), Kind::Scaffold);
        tally.emit(
            class,
            vocab::rdfs::label(),
            Term::Literal(Literal::lang(format!("synthetic class {i}"), "en")),
            Kind::Label,
        );
        if i > 0 {
            let parent = classes[rng.random_range(0..i)].clone();
            tally.emit(
                class,
                vocab::rdfs::sub_class_of(),
                Term::Iri(parent.clone()),
                Kind::Subclass,
            );
            class_edges.insert((class.clone(), parent));
        }
    }

    let individuals: Vec<Iri> = (0..individual_count)
        .map(|i| synth_iri(&format!("item{i:04}")))
        .collect();
    for (i, item) in individuals.iter().enumerate() {
        let class = classes[rng.random_range(0..class_count)].clone();
        tally.emit(item, vocab::rdf::type_(), Term::Iri(class), Kind::Typing);
        tally.emit(
            item,
            vocab::rdfs::label(),
            Term::Literal(Literal::lang(format!("synthetic item {i}"), "en")),
            Kind::Label,
        );
        if individual_count > 1 {
            for _ in 0..rng.random_range(0..=2) {
                let mut target = rng.random_range(0..individual_count);
                while target == i {
                    target = rng.random_range(0..individual_count);
                }
                let property = aero_iri(OBJECT_PROPERTIES[rng.random_range(0..OBJECT_PROPERTIES.len())]);
                tally.emit(
                    item,
                    property,
                    Term::Iri(individuals[target].clone()),
                    Kind::ObjectLink,
                );
            }
        }
        if i % 7 == 0 {
            tally.emit(
                item,
                aero_iri("alias"),
                Term::Literal(Literal::lang(format!("alt name {i}"), "en")),
                Kind::Alias,
            );
        }
        if i % 11 == 0 {
            let value = SOURCE_VOCABULARY[(i / 11) % SOURCE_VOCABULARY.len()];
            tally.emit(
                item,
                aero_iri("source"),
                Term::Literal(Literal::string(value)),
                Kind::Source,
            );
        }
        if i % 13 == 0 {
            tally.emit(
                item,
                aero_iri("wikidataUri"),
                Term::Literal(Literal::string(format!("https://www.wikidata.org/wiki/Q9{i:04}"))),
                Kind::ExternalId,
            );
        }
        if i % 17 == 0 {
            tally.emit(
                item,
                aero_iri("doi"),
                Term::Literal(Literal::string(format!("10.5555/synth.{i:04}"))),
                Kind::ExternalId,
            );
        }
    }

    let ambiguous = tally
        .instance_sources
        .intersection(&tally.class_nodes)
        .count() as u64;
    let entity_iris: BTreeSet<Iri> = classes.iter().chain(individuals.iter()).cloned().collect();
    let summary = SynthSummary {
        classes: class_count,
        individuals: individual_count,
        class_edges,
        entity_iris,
        triple_total: tally.triples.len() as u64,
        domain_triples: tally.domain,
        wikibase_triples: 0,
        other_triples: tally.other,
        instance_nodes: tally.instance_sources.len() as u64 - ambiguous,
        class_nodes: tally.class_nodes.len() as u64 - ambiguous,
        ambiguous_nodes: ambiguous,
        internal_edges: tally.internal,
        external_edges: tally.external,
        annotation_edges: tally.annotation,
        iri_nodes: tally.iris.len() as u64,
        blank_nodes: 0,
        literal_nodes: (tally.lang_literals.len() + tally.plain_literals.len()) as u64,
        langstring_literals: tally.lang_literals.len() as u64,
        plain_literals: tally.plain_literals.len() as u64,
    };
    SynthOntology {
        doc: OntologyDocument::from_triples(tally.triples),
        summary,
    }
}
