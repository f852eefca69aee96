//! Triple stream measurement: node and literal inventories, predicate
//! categories, and the class/instance taxonomy, all computed the same
//! way whether the stream is an ontology file or a store export.

use std::collections::{BTreeMap, BTreeSet};

use owlbase_model::dict::{Datatype, MappingKind};
use owlbase_model::{wbns, MappingDictionary};
use owlbase_rdf::{Term, Triple};
use serde::{Deserialize, Serialize};

/// Namespaces whose members are modelling vocabulary, not domain data.
/// An instance-of or subclass-of triple pointing into one of these is
/// scaffolding (e.g. `rdf:type owl:Class`) and stays out of the domain
/// category; without this rule every class declaration would count as a
/// domain membership assertion.
const RESERVED_NAMESPACES: [&str; 4] = [
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "http://www.w3.org/2000/01/rdf-schema#",
    "http://www.w3.org/2002/07/owl#",
    wbns::WIKIBASE,
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCategories {
    pub domain: u64,
    #[serde(rename = "wikibase-ontology")]
    pub wikibase_ontology: u64,
    pub other: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeTaxonomy {
    pub instance: u64,
    pub class: u64,
    /// Nodes acting as both an instance source and a class.
    pub ambiguous: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTaxonomy {
    #[serde(rename = "object-internal")]
    pub object_internal: u64,
    #[serde(rename = "object-external")]
    pub object_external: u64,
    pub annotation: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub node_total: u64,
    /// Distinct IRI-position nodes; blank nodes are included here and
    /// also reported separately.
    pub iri_nodes: u64,
    pub blank_nodes: u64,
    pub literal_nodes: u64,
    /// Distinct literals per datatype IRI.
    pub literal_histogram: BTreeMap<String, u64>,
    pub triple_total: u64,
    pub triple_categories: TripleCategories,
    pub node_taxonomy: NodeTaxonomy,
    pub edge_taxonomy: EdgeTaxonomy,
}

impl GraphStats {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialize")
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StatsOptions {
    /// Compute the class/instance taxonomy over every triple instead of
    /// domain-category triples only.
    pub taxonomy_over_all_triples: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Category {
    Domain,
    WikibaseOntology,
    Other,
}

/// Dictionary-derived lookup tables. Predicates are recognized in both
/// their ontology form (the mapped IRI) and their direct-claim form
/// (`wdt:Pn`), so the same rules measure source files and exports.
struct Context {
    mapped: BTreeMap<String, (MappingKind, Datatype)>,
    instance_predicates: BTreeSet<String>,
    subclass_predicates: BTreeSet<String>,
}

impl Context {
    fn new(dict: &MappingDictionary) -> Context {
        let mut mapped = BTreeMap::new();
        for entry in dict.entries() {
            let info = (entry.kind, entry.datatype);
            mapped.insert(entry.iri.as_str().to_owned(), info);
            mapped.insert(wbns::direct_claim_iri(entry.property).as_str().to_owned(), info);
        }
        let both_forms = |entry: &owlbase_model::DictEntry| {
            BTreeSet::from([
                entry.iri.as_str().to_owned(),
                wbns::direct_claim_iri(entry.property).as_str().to_owned(),
            ])
        };
        Context {
            mapped,
            instance_predicates: both_forms(dict.instance_of()),
            subclass_predicates: both_forms(dict.subclass_of()),
        }
    }

    fn is_structural_link(&self, predicate: &str) -> bool {
        self.instance_predicates.contains(predicate) || self.subclass_predicates.contains(predicate)
    }

    fn categorize(&self, triple: &Triple) -> Category {
        let predicate = triple.predicate.as_str();
        if self.mapped.contains_key(predicate)
            && !(self.is_structural_link(predicate) && reserved_object(triple))
        {
            return Category::Domain;
        }
        if predicate.starts_with(wbns::WIKIBASE) {
            return Category::WikibaseOntology;
        }
        Category::Other
    }
}

fn reserved_object(triple: &Triple) -> bool {
    match &triple.object {
        Term::Iri(iri) => RESERVED_NAMESPACES.iter().any(|ns| iri.as_str().starts_with(ns)),
        _ => false,
    }
}

/// Streaming accumulator. Partial accumulators built from the same
/// dictionary and options can be merged in any grouping; the result is
/// identical to a single pass.
pub struct StatsBuilder {
    context: Context,
    options: StatsOptions,
    iri_nodes: BTreeSet<String>,
    blank_nodes: BTreeSet<String>,
    literal_nodes: BTreeSet<(String, String, Option<String>)>,
    triple_total: u64,
    categories: TripleCategories,
    instance_sources: BTreeSet<String>,
    class_nodes: BTreeSet<String>,
    edges: EdgeTaxonomy,
}

impl StatsBuilder {
    pub fn new(dict: &MappingDictionary) -> StatsBuilder {
        StatsBuilder::with_options(dict, StatsOptions::default())
    }

    pub fn with_options(dict: &MappingDictionary, options: StatsOptions) -> StatsBuilder {
        StatsBuilder {
            context: Context::new(dict),
            options,
            iri_nodes: BTreeSet::new(),
            blank_nodes: BTreeSet::new(),
            literal_nodes: BTreeSet::new(),
            triple_total: 0,
            categories: TripleCategories::default(),
            instance_sources: BTreeSet::new(),
            class_nodes: BTreeSet::new(),
            edges: EdgeTaxonomy::default(),
        }
    }

    pub fn add(&mut self, triple: &Triple) {
        self.triple_total += 1;

        match triple.subject.as_iri() {
            Some(iri) => {
                self.iri_nodes.insert(iri.as_str().to_owned());
            }
            None => {
                self.blank_nodes.insert(subject_key(triple));
            }
        }
        match &triple.object {
            Term::Iri(iri) => {
                self.iri_nodes.insert(iri.as_str().to_owned());
            }
            Term::Blank(id) => {
                self.blank_nodes.insert(format!("_:{id}"));
            }
            Term::Literal(lit) => {
                self.literal_nodes.insert((
                    lit.lexical().to_owned(),
                    lit.datatype().as_str().to_owned(),
                    lit.language().map(str::to_owned),
                ));
            }
        }

        let category = self.context.categorize(triple);
        match category {
            Category::Domain => self.categories.domain += 1,
            Category::WikibaseOntology => self.categories.wikibase_ontology += 1,
            Category::Other => self.categories.other += 1,
        }

        if category == Category::Domain {
            let predicate = triple.predicate.as_str();
            if let Some(&(kind, datatype)) = self.context.mapped.get(predicate) {
                if kind == MappingKind::Annotation {
                    self.edges.annotation += 1;
                } else {
                    match datatype {
                        Datatype::ItemRef => self.edges.object_internal += 1,
                        Datatype::ExternalId | Datatype::Url => self.edges.object_external += 1,
                        _ => {}
                    }
                }
            }
        }

        if category == Category::Domain || self.options.taxonomy_over_all_triples {
            let predicate = triple.predicate.as_str();
            if self.context.instance_predicates.contains(predicate) {
                self.instance_sources.insert(subject_key(triple));
                if let Term::Iri(target) = &triple.object {
                    self.class_nodes.insert(target.as_str().to_owned());
                }
            } else if self.context.subclass_predicates.contains(predicate) {
                self.class_nodes.insert(subject_key(triple));
                if let Term::Iri(target) = &triple.object {
                    self.class_nodes.insert(target.as_str().to_owned());
                }
            }
        }
    }

    /// Combine two partial aggregations (built over the same dictionary
    /// and options).
    pub fn merge(mut self, other: StatsBuilder) -> StatsBuilder {
        self.iri_nodes.extend(other.iri_nodes);
        self.blank_nodes.extend(other.blank_nodes);
        self.literal_nodes.extend(other.literal_nodes);
        self.triple_total += other.triple_total;
        self.categories.domain += other.categories.domain;
        self.categories.wikibase_ontology += other.categories.wikibase_ontology;
        self.categories.other += other.categories.other;
        self.instance_sources.extend(other.instance_sources);
        self.class_nodes.extend(other.class_nodes);
        self.edges.object_internal += other.edges.object_internal;
        self.edges.object_external += other.edges.object_external;
        self.edges.annotation += other.edges.annotation;
        self
    }

    pub fn finish(self) -> GraphStats {
        let mut literal_histogram: BTreeMap<String, u64> = BTreeMap::new();
        for (_, datatype, _) in &self.literal_nodes {
            *literal_histogram.entry(datatype.clone()).or_default() += 1;
        }
        let blank = self.blank_nodes.len() as u64;
        let iri = self.iri_nodes.len() as u64 + blank;
        let literal = self.literal_nodes.len() as u64;

        let ambiguous = self.instance_sources.intersection(&self.class_nodes).count() as u64;
        let instance = self.instance_sources.len() as u64 - ambiguous;
        let class = self.class_nodes.len() as u64 - ambiguous;

        GraphStats {
            node_total: iri + literal,
            iri_nodes: iri,
            blank_nodes: blank,
            literal_nodes: literal,
            literal_histogram,
            triple_total: self.triple_total,
            triple_categories: self.categories,
            node_taxonomy: NodeTaxonomy { instance, class, ambiguous },
            edge_taxonomy: self.edges,
        }
    }
}

fn subject_key(triple: &Triple) -> String {
    match &triple.subject {
        owlbase_rdf::Node::Iri(iri) => iri.as_str().to_owned(),
        owlbase_rdf::Node::Blank(id) => format!("_:{id}"),
    }
}

pub fn compute_stats(triples: &[Triple], dict: &MappingDictionary) -> GraphStats {
    compute_stats_with(triples, dict, StatsOptions::default())
}

pub fn compute_stats_with(
    triples: &[Triple],
    dict: &MappingDictionary,
    options: StatsOptions,
) -> GraphStats {
    let mut builder = StatsBuilder::with_options(dict, options);
    for triple in triples {
        builder.add(triple);
    }
    builder.finish()
}
