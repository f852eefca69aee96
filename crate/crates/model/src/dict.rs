//! The mapping dictionary: which Wikibase property realizes each ontology
//! property, and with which datatype.

use std::collections::BTreeMap;
use std::fmt;

use owlbase_rdf::{AnnotationRouting, Iri, OntologyDocument};
use serde::{Deserialize, Serialize};

use crate::error::MapError;
use crate::ids::PropertyId;
use crate::schema::DomainSchema;

/// Wikibase datatypes the pipeline can write.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Datatype {
    #[serde(rename = "item-ref")]
    ItemRef,
    #[serde(rename = "string")]
    String,
    #[serde(rename = "external-id")]
    ExternalId,
    #[serde(rename = "url")]
    Url,
    #[serde(rename = "time")]
    Time,
    #[serde(rename = "quantity")]
    Quantity,
    #[serde(rename = "monolingual-text")]
    MonolingualText,
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Datatype::ItemRef => "item-ref",
            Datatype::String => "string",
            Datatype::ExternalId => "external-id",
            Datatype::Url => "url",
            Datatype::Time => "time",
            Datatype::Quantity => "quantity",
            Datatype::MonolingualText => "monolingual-text",
        };
        f.write_str(name)
    }
}

/// How an entry participates in mapping. Structural entries realize the
/// RDF backbone (instance of, subclass of, ontology iri); the rest mirror
/// the three property categories of the domain schema.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MappingKind {
    Object,
    Annotation,
    ExternalId,
    Structural,
}

pub const STRUCTURAL_INSTANCE_OF: &str = "instance of";
pub const STRUCTURAL_SUBCLASS_OF: &str = "subclass of";
pub const STRUCTURAL_ONTOLOGY_IRI: &str = "ontology iri";

/// The reserved annotation name whose values go to the alias fields of an
/// entity instead of claims.
pub const ALIAS_NAME: &str = "alias";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub iri: Iri,
    pub property: PropertyId,
    pub datatype: Datatype,
    pub kind: MappingKind,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappingDictionary {
    pub label_language: String,
    pub strict: bool,
    entries: BTreeMap<Iri, DictEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
struct MappingFile {
    label_language: String,
    #[serde(default = "default_strict")]
    strict: bool,
    properties: Vec<RawEntry>,
}

fn default_strict() -> bool {
    true
}

#[derive(Debug, Serialize, Deserialize)]
struct RawEntry {
    iri: String,
    property: String,
    datatype: Datatype,
    kind: MappingKind,
    name: String,
}

/// Parse and validate a mapping dictionary from its JSON document.
pub fn load_mapping(text: &str) -> Result<MappingDictionary, MapError> {
    let file: MappingFile =
        serde_json::from_str(text).map_err(|e| MapError::InvalidDictionary(e.to_string()))?;

    let mut entries: BTreeMap<Iri, DictEntry> = BTreeMap::new();
    let mut by_target: BTreeMap<PropertyId, Datatype> = BTreeMap::new();
    for raw in file.properties {
        let iri = Iri::new(&raw.iri)
            .map_err(|e| MapError::InvalidDictionary(format!("entry '{}': {e}", raw.iri)))?;
        let property: PropertyId = raw.property.parse()?;
        if let Some(existing) = by_target.get(&property) {
            if *existing != raw.datatype {
                return Err(MapError::DuplicateTarget {
                    property,
                    existing: *existing,
                    conflicting: raw.datatype,
                });
            }
        }
        by_target.insert(property, raw.datatype);
        let entry = DictEntry {
            iri: iri.clone(),
            property,
            datatype: raw.datatype,
            kind: raw.kind,
            name: raw.name,
        };
        if entries.insert(iri.clone(), entry).is_some() {
            return Err(MapError::DuplicateOntologyIri { iri });
        }
    }

    let dict = MappingDictionary {
        label_language: file.label_language,
        strict: file.strict,
        entries,
    };
    for name in [
        STRUCTURAL_INSTANCE_OF,
        STRUCTURAL_SUBCLASS_OF,
        STRUCTURAL_ONTOLOGY_IRI,
    ] {
        if dict.structural(name).is_none() {
            return Err(MapError::MissingStructural { name });
        }
    }
    Ok(dict)
}

impl MappingDictionary {
    pub fn get(&self, iri: &Iri) -> Option<&DictEntry> {
        self.entries.get(iri)
    }

    pub fn entries(&self) -> impl Iterator<Item = &DictEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn structural(&self, name: &str) -> Option<&DictEntry> {
        self.entries
            .values()
            .find(|e| e.kind == MappingKind::Structural && e.name == name)
    }

    pub fn instance_of(&self) -> &DictEntry {
        self.structural(STRUCTURAL_INSTANCE_OF)
            .expect("validated at load time")
    }

    pub fn subclass_of(&self) -> &DictEntry {
        self.structural(STRUCTURAL_SUBCLASS_OF)
            .expect("validated at load time")
    }

    pub fn ontology_iri(&self) -> &DictEntry {
        self.structural(STRUCTURAL_ONTOLOGY_IRI)
            .expect("validated at load time")
    }

    /// Routing for the extraction step: which ontology properties feed
    /// aliases and external identifiers.
    pub fn annotation_routing(&self) -> AnnotationRouting {
        AnnotationRouting {
            alias_properties: self
                .entries
                .values()
                .filter(|e| e.kind == MappingKind::Annotation && e.name == ALIAS_NAME)
                .map(|e| e.iri.clone())
                .collect(),
            external_id_properties: self
                .entries
                .values()
                .filter(|e| e.kind == MappingKind::ExternalId)
                .map(|e| e.iri.clone())
                .collect(),
        }
    }

    /// Domain-schema properties this dictionary does not cover.
    pub fn missing_from(&self, schema: &DomainSchema) -> Vec<&'static str> {
        schema
            .all_properties()
            .filter(|(_, iri)| !self.entries.contains_key(iri))
            .map(|(name, _)| name)
            .collect()
    }
}

/// Every non-structural predicate used in the document that the dictionary
/// cannot map. An empty result means the ontology is fully ingestible.
pub fn validate_extensibility(doc: &OntologyDocument, dict: &MappingDictionary) -> Vec<Iri> {
    doc.predicates()
        .into_iter()
        .filter(|p| !p.is_structural_vocab())
        .filter(|p| dict.get(p).is_none())
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(iri: &str, property: &str, datatype: &str, kind: &str, name: &str) -> String {
        format!(
            r#"{{"iri":"{iri}","property":"{property}","datatype":"{datatype}","kind":"{kind}","name":"{name}"}}"#
        )
    }

    fn minimal_entries() -> Vec<String> {
        vec![
            entry(
                "http://www.w3.org/1999/02/22-rdf-syntax-ns#type",
                "P1",
                "item-ref",
                "structural",
                "instance of",
            ),
            entry(
                "http://www.w3.org/2000/01/rdf-schema#subClassOf",
                "P2",
                "item-ref",
                "structural",
                "subclass of",
            ),
            entry(
                "urn:owlbase:ontology-iri",
                "P3",
                "external-id",
                "structural",
                "ontology iri",
            ),
        ]
    }

    fn file(entries: &[String]) -> String {
        format!(
            r#"{{"label_language":"en","strict":true,"properties":[{}]}}"#,
            entries.join(",")
        )
    }

    #[test]
    fn minimal_valid_dictionary_loads() {
        let dict = load_mapping(&file(&minimal_entries())).unwrap();
        assert_eq!(dict.len(), 3);
        assert_eq!(dict.instance_of().property, PropertyId::new(1));
        assert_eq!(dict.ontology_iri().datatype, Datatype::ExternalId);
        assert!(dict.strict);
    }

    #[test]
    fn missing_instance_of_is_rejected() {
        let entries = minimal_entries()[1..].to_vec();
        let err = load_mapping(&file(&entries)).unwrap_err();
        assert_eq!(
            err,
            MapError::MissingStructural {
                name: STRUCTURAL_INSTANCE_OF
            }
        );
    }

    #[test]
    fn conflicting_datatypes_for_one_target_are_rejected() {
        let mut entries = minimal_entries();
        entries.push(entry("http://e/a", "P5", "string", "annotation", "a"));
        entries.push(entry("http://e/b", "P5", "item-ref", "object", "b"));
        let err = load_mapping(&file(&entries)).unwrap_err();
        assert!(matches!(err, MapError::DuplicateTarget { property, .. }
            if property == PropertyId::new(5)));
    }

    #[test]
    fn same_target_same_datatype_is_allowed() {
        let mut entries = minimal_entries();
        entries.push(entry("http://e/a", "P5", "string", "annotation", "a"));
        entries.push(entry("http://e/b", "P5", "string", "annotation", "b"));
        assert!(load_mapping(&file(&entries)).is_ok());
    }

    #[test]
    fn malformed_property_id_is_rejected() {
        let mut entries = minimal_entries();
        entries.push(entry("http://e/a", "P07", "string", "annotation", "a"));
        let err = load_mapping(&file(&entries)).unwrap_err();
        assert!(matches!(err, MapError::MalformedId { .. }));
    }

    #[test]
    fn repeated_ontology_iri_is_rejected() {
        let mut entries = minimal_entries();
        entries.push(entry("http://e/a", "P5", "string", "annotation", "a"));
        entries.push(entry("http://e/a", "P6", "string", "annotation", "a2"));
        let err = load_mapping(&file(&entries)).unwrap_err();
        assert!(matches!(err, MapError::DuplicateOntologyIri { .. }));
    }

    #[test]
    fn routing_selects_alias_and_external_id_entries() {
        let mut entries = minimal_entries();
        entries.push(entry(
            "http://e/alias",
            "P11",
            "monolingual-text",
            "annotation",
            "alias",
        ));
        entries.push(entry("http://e/doi", "P14", "external-id", "external-id", "doi"));
        entries.push(entry("http://e/src", "P12", "string", "annotation", "source"));
        let dict = load_mapping(&file(&entries)).unwrap();
        let routing = dict.annotation_routing();
        assert_eq!(routing.alias_properties.len(), 1);
        // structural ontology-iri entries are not extraction targets
        assert_eq!(routing.external_id_properties.len(), 1);
        assert!(routing
            .external_id_properties
            .contains(&Iri::new("http://e/doi").unwrap()));
    }
}
