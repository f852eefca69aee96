//! The fixed aerospace domain schema: the named classes and properties
//! every deployment of the pipeline starts from.

use std::collections::BTreeMap;

use owlbase_rdf::Iri;

/// The base namespace of the shipped domain schema.
pub const DOMAIN_NS: &str = "http://example.org/aero#";

/// Synthetic property IRI under which every item records the ontology IRI
/// it was created from. It has no counterpart in the source ontology, so
/// it lives in a reserved URN namespace.
pub const ONTOLOGY_IRI_PROPERTY: &str = "urn:owlbase:ontology-iri";

/// Named IRI sets for the domain's classes and properties. The schema is
/// total: every accessor below is guaranteed present, and all IRIs are
/// distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainSchema {
    pub class_iris: BTreeMap<&'static str, Iri>,
    pub object_property_iris: BTreeMap<&'static str, Iri>,
    pub annotation_property_iris: BTreeMap<&'static str, Iri>,
    pub external_id_iris: BTreeMap<&'static str, Iri>,
}

pub const CLASS_NAMES: [&str; 6] = [
    "Process",
    "Software",
    "Data item",
    "Data format specification",
    "Data model",
    "Contribution",
];

pub const OBJECT_PROPERTY_NAMES: [&str; 7] = [
    "has process",
    "has software",
    "has data item",
    "has data format specification",
    "has data model",
    "mentions",
    "has part",
];

pub const ANNOTATION_PROPERTY_NAMES: [&str; 2] = ["alias", "source"];

pub const EXTERNAL_ID_NAMES: [&str; 3] = ["wikidata uri", "doi", "ontology iri"];

/// Recommended values for the "source" annotation; QA warns outside it.
pub const SOURCE_VOCABULARY: [&str; 3] = ["literature review", "survey", "interview"];

impl DomainSchema {
    /// The schema shipped with the repo, rooted in [`DOMAIN_NS`].
    pub fn standard() -> DomainSchema {
        fn local(name: &str) -> Iri {
            // "has data item" -> hasDataItem
            let mut out = String::new();
            for (i, word) in name.split_whitespace().enumerate() {
                let mut chars = word.chars();
                let first = chars.next().expect("names have no empty words");
                if i == 0 {
                    out.push(first);
                } else {
                    out.extend(first.to_uppercase());
                }
                out.push_str(chars.as_str());
            }
            Iri::new(format!("{DOMAIN_NS}{out}")).expect("schema IRIs are well-formed")
        }

        let class_iris = CLASS_NAMES
            .iter()
            .map(|n| {
                let camel: String = n
                    .split_whitespace()
                    .map(|w| {
                        let mut c = w.chars();
                        c.next().unwrap().to_uppercase().collect::<String>() + c.as_str()
                    })
                    .collect();
                (*n, Iri::new(format!("{DOMAIN_NS}{camel}")).unwrap())
            })
            .collect();
        let object_property_iris = OBJECT_PROPERTY_NAMES.iter().map(|n| (*n, local(n))).collect();
        let annotation_property_iris = ANNOTATION_PROPERTY_NAMES
            .iter()
            .map(|n| (*n, local(n)))
            .collect();
        let mut external_id_iris: BTreeMap<&'static str, Iri> = BTreeMap::new();
        external_id_iris.insert("wikidata uri", local("wikidata uri"));
        external_id_iris.insert("doi", local("doi"));
        external_id_iris.insert("ontology iri", Iri::from_static(ONTOLOGY_IRI_PROPERTY));

        DomainSchema {
            class_iris,
            object_property_iris,
            annotation_property_iris,
            external_id_iris,
        }
    }

    /// Every (name, IRI) pair of every category, for coverage checks.
    pub fn all_properties(&self) -> impl Iterator<Item = (&'static str, &Iri)> {
        self.object_property_iris
            .iter()
            .chain(self.annotation_property_iris.iter())
            .chain(self.external_id_iris.iter())
            .map(|(n, iri)| (*n, iri))
    }
}
