//! Schema and individual extraction from a parsed document.
//!
//! Turns raw triples into the class, property and individual records the
//! ingestion pipeline consumes. Blank nodes may appear in the triples but
//! not as the identifier of anything we would turn into an item.

use std::collections::{BTreeMap, BTreeSet};

use crate::document::OntologyDocument;
use crate::error::RdfError;
use crate::term::{Iri, Literal, Node, Term};
use crate::vocab;

/// Default language assumed for labels and comments without a tag.
pub const DEFAULT_LANG: &str = "en";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub iri: Iri,
    pub labels: BTreeMap<String, String>,
    pub description: BTreeMap<String, String>,
    /// Direct superclasses. Never contains the class itself.
    pub parents: BTreeSet<Iri>,
    pub annotations: BTreeMap<Iri, Vec<Literal>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropertyKind {
    Object,
    Annotation,
    Datatype,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyDef {
    pub iri: Iri,
    pub kind: PropertyKind,
    pub labels: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndividualDef {
    pub iri: Iri,
    pub labels: BTreeMap<String, String>,
    pub description: BTreeMap<String, String>,
    /// Asserted classes, structural vocabulary excluded. Never empty.
    pub types: BTreeSet<Iri>,
    pub object_assertions: Vec<(Iri, Iri)>,
    pub annotations: BTreeMap<Iri, Vec<Literal>>,
    /// (language, value) pairs, deduplicated per language.
    pub aliases: Vec<(String, String)>,
    pub external_ids: BTreeMap<Iri, String>,
}

/// Which annotation properties feed aliases and external identifiers
/// instead of the general annotation map. Built by the mapping layer.
#[derive(Debug, Clone, Default)]
pub struct AnnotationRouting {
    pub alias_properties: BTreeSet<Iri>,
    pub external_id_properties: BTreeSet<Iri>,
}

#[derive(Debug, Clone, Default)]
pub struct IndividualExtraction {
    pub individuals: Vec<IndividualDef>,
    /// One entry per individual whose asserted classes are all unknown.
    pub warnings: Vec<String>,
}

/// Collect class and property declarations.
///
/// A subject typed as `owl:Class` or `rdfs:Class` becomes a [`ClassDef`];
/// subjects typed as one of the three OWL property kinds become
/// [`PropertyDef`]s. A blank node in either position is an error because
/// downstream items need stable IRIs.
pub fn extract_schema(
    doc: &OntologyDocument,
) -> Result<(Vec<ClassDef>, Vec<PropertyDef>), RdfError> {
    let mut class_iris: BTreeSet<Iri> = BTreeSet::new();
    let mut property_kinds: BTreeMap<Iri, PropertyKind> = BTreeMap::new();

    for triple in doc.triples() {
        if triple.predicate != vocab::rdf::type_() {
            continue;
        }
        let Term::Iri(type_iri) = &triple.object else {
            continue;
        };
        let declared_kind = if *type_iri == vocab::owl::class() || *type_iri == vocab::rdfs::class()
        {
            None
        } else if *type_iri == vocab::owl::object_property() {
            Some(PropertyKind::Object)
        } else if *type_iri == vocab::owl::annotation_property() {
            Some(PropertyKind::Annotation)
        } else if *type_iri == vocab::owl::datatype_property() {
            Some(PropertyKind::Datatype)
        } else {
            continue;
        };
        let iri = match &triple.subject {
            Node::Iri(iri) => iri.clone(),
            Node::Blank(id) => {
                return Err(RdfError::BlankNodeEntity {
                    node: id.clone(),
                    role: if declared_kind.is_none() {
                        "class"
                    } else {
                        "property"
                    },
                });
            }
        };
        match declared_kind {
            None => {
                class_iris.insert(iri);
            }
            Some(kind) => {
                property_kinds.insert(iri, kind);
            }
        }
    }

    let mut classes = Vec::with_capacity(class_iris.len());
    for iri in &class_iris {
        let subject = Node::Iri(iri.clone());
        let mut def = ClassDef {
            iri: iri.clone(),
            labels: BTreeMap::new(),
            description: BTreeMap::new(),
            parents: BTreeSet::new(),
            annotations: BTreeMap::new(),
        };
        for triple in doc.triples().filter(|t| t.subject == subject) {
            if triple.predicate == vocab::rdfs::sub_class_of() {
                match &triple.object {
                    Term::Iri(parent) if parent != iri => {
                        def.parents.insert(parent.clone());
                    }
                    Term::Iri(_) => {}
                    Term::Blank(id) => {
                        return Err(RdfError::BlankNodeEntity {
                            node: id.clone(),
                            role: "class",
                        });
                    }
                    Term::Literal(_) => {}
                }
            } else if triple.predicate == vocab::rdfs::label() {
                collect_text(&mut def.labels, &triple.object);
            } else if triple.predicate == vocab::rdfs::comment() {
                collect_text(&mut def.description, &triple.object);
            } else if !triple.predicate.is_structural_vocab() {
                if let Term::Literal(lit) = &triple.object {
                    def.annotations
                        .entry(triple.predicate.clone())
                        .or_default()
                        .push(lit.clone());
                }
            }
        }
        classes.push(def);
    }

    let mut properties = Vec::with_capacity(property_kinds.len());
    for (iri, kind) in &property_kinds {
        let subject = Node::Iri(iri.clone());
        let mut labels = BTreeMap::new();
        for triple in doc.triples().filter(|t| t.subject == subject) {
            if triple.predicate == vocab::rdfs::label() {
                collect_text(&mut labels, &triple.object);
            }
        }
        properties.push(PropertyDef {
            iri: iri.clone(),
            kind: *kind,
            labels,
        });
    }

    Ok((classes, properties))
}

/// Collect individuals: subjects asserting an `rdf:type` whose target is a
/// domain class rather than structural vocabulary. Routing decides which
/// annotation properties become aliases or external identifiers.
pub fn extract_individuals(
    doc: &OntologyDocument,
    classes: &[ClassDef],
    routing: &AnnotationRouting,
) -> Result<IndividualExtraction, RdfError> {
    let known: BTreeSet<&Iri> = classes.iter().map(|c| &c.iri).collect();

    // first pass: which subjects carry an instance-defining type
    let mut types_of: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
    for triple in doc.triples() {
        if triple.predicate != vocab::rdf::type_() {
            continue;
        }
        let Term::Iri(type_iri) = &triple.object else {
            continue;
        };
        if type_iri.is_structural_vocab() {
            continue;
        }
        match &triple.subject {
            Node::Iri(iri) => {
                types_of
                    .entry(iri.clone())
                    .or_default()
                    .insert(type_iri.clone());
            }
            Node::Blank(id) => {
                return Err(RdfError::BlankNodeEntity {
                    node: id.clone(),
                    role: "individual",
                });
            }
        }
    }

    let mut out = IndividualExtraction::default();
    for (iri, types) in &types_of {
        if types.iter().all(|t| !known.contains(t)) {
            out.warnings.push(format!(
                "individual <{iri}> is typed only by classes absent from the schema"
            ));
        }
        let subject = Node::Iri(iri.clone());
        let mut def = IndividualDef {
            iri: iri.clone(),
            labels: BTreeMap::new(),
            description: BTreeMap::new(),
            types: types.clone(),
            object_assertions: Vec::new(),
            annotations: BTreeMap::new(),
            aliases: Vec::new(),
            external_ids: BTreeMap::new(),
        };
        let mut seen_aliases: BTreeSet<(String, String)> = BTreeSet::new();
        for triple in doc.triples().filter(|t| t.subject == subject) {
            let p = &triple.predicate;
            if *p == vocab::rdfs::label() {
                collect_text(&mut def.labels, &triple.object);
                continue;
            }
            if *p == vocab::rdfs::comment() {
                collect_text(&mut def.description, &triple.object);
                continue;
            }
            if p.is_structural_vocab() {
                continue;
            }
            if routing.external_id_properties.contains(p) {
                let value = match &triple.object {
                    Term::Iri(v) => v.as_str().to_string(),
                    Term::Literal(lit) => lit.lexical().to_string(),
                    Term::Blank(id) => {
                        return Err(RdfError::BlankNodeEntity {
                            node: id.clone(),
                            role: "external identifier",
                        });
                    }
                };
                def.external_ids.entry(p.clone()).or_insert(value);
                continue;
            }
            if routing.alias_properties.contains(p) {
                if let Term::Literal(lit) = &triple.object {
                    let lang = lit.language().unwrap_or(DEFAULT_LANG).to_string();
                    let pair = (lang, lit.lexical().to_string());
                    if seen_aliases.insert(pair.clone()) {
                        def.aliases.push(pair);
                    }
                }
                continue;
            }
            match &triple.object {
                Term::Iri(target) => def.object_assertions.push((p.clone(), target.clone())),
                Term::Blank(id) => {
                    return Err(RdfError::BlankNodeEntity {
                        node: id.clone(),
                        role: "individual",
                    });
                }
                Term::Literal(lit) => def
                    .annotations
                    .entry(p.clone())
                    .or_default()
                    .push(lit.clone()),
            }
        }
        def.aliases.sort();
        out.individuals.push(def);
    }
    Ok(out)
}

/// Record a label or comment keyed by language; untagged text counts as
/// [`DEFAULT_LANG`]. The first value per language wins, which is
/// deterministic because triples iterate in sorted order.
fn collect_text(map: &mut BTreeMap<String, String>, object: &Term) {
    if let Term::Literal(lit) = object {
        let lang = lit.language().unwrap_or(DEFAULT_LANG).to_string();
        map.entry(lang).or_insert_with(|| lit.lexical().to_string());
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::turtle;

    const PREAMBLE: &str = "@prefix ex: <http://e/> .\n\
        @prefix owl: <http://www.w3.org/2002/07/owl#> .\n\
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n";

    fn doc(body: &str) -> OntologyDocument {
        turtle::parse(&format!("{PREAMBLE}{body}")).unwrap()
    }

    #[test]
    fn classes_with_labels_parents_and_comments() {
        let doc = doc(
            "ex:A a owl:Class ; rdfs:label \"A\"@en ; rdfs:comment \"base\" .\n\
             ex:B a owl:Class ; rdfs:label \"B\" ; rdfs:subClassOf ex:A .",
        );
        let (classes, properties) = extract_schema(&doc).unwrap();
        assert!(properties.is_empty());
        assert_eq!(classes.len(), 2);
        let a = &classes[0];
        assert_eq!(a.labels.get("en").map(String::as_str), Some("A"));
        assert_eq!(a.description.get("en").map(String::as_str), Some("base"));
        let b = &classes[1];
        // untagged labels land under the default language
        assert_eq!(b.labels.get(DEFAULT_LANG).map(String::as_str), Some("B"));
        assert_eq!(b.parents.len(), 1);
        assert!(b.parents.contains(&a.iri));
    }

    #[test]
    fn self_parent_edges_are_dropped() {
        let doc = doc("ex:A a owl:Class ; rdfs:subClassOf ex:A .");
        let (classes, _) = extract_schema(&doc).unwrap();
        assert!(classes[0].parents.is_empty());
    }

    #[test]
    fn property_declarations_carry_their_kind() {
        let doc = doc(
            "ex:p a owl:ObjectProperty ; rdfs:label \"p\" .\n\
             ex:q a owl:AnnotationProperty .\n\
             ex:r a owl:DatatypeProperty .",
        );
        let (_, properties) = extract_schema(&doc).unwrap();
        let kinds: Vec<PropertyKind> = properties.iter().map(|p| p.kind).collect();
        assert_eq!(
            kinds,
            vec![
                PropertyKind::Object,
                PropertyKind::Annotation,
                PropertyKind::Datatype
            ]
        );
    }

    #[test]
    fn blank_class_subject_is_rejected() {
        let doc = doc("_:b a owl:Class .");
        let err = extract_schema(&doc).unwrap_err();
        assert!(matches!(err, RdfError::BlankNodeEntity { role: "class", .. }));
    }

    #[test]
    fn individuals_partition_assertions_by_routing() {
        let doc = doc(
            "ex:C a owl:Class .\n\
             ex:i a ex:C ;\n\
                  rdfs:label \"I\"@en ;\n\
                  ex:link ex:j ;\n\
                  ex:alias \"nick\"@en , \"nick\"@en ;\n\
                  ex:wikidata \"https://www.wikidata.org/wiki/Q1\" ;\n\
                  ex:source \"survey\" .\n\
             ex:j a ex:C .",
        );
        let (classes, _) = extract_schema(&doc).unwrap();
        let routing = AnnotationRouting {
            alias_properties: [Iri::new("http://e/alias").unwrap()].into(),
            external_id_properties: [Iri::new("http://e/wikidata").unwrap()].into(),
        };
        let result = extract_individuals(&doc, &classes, &routing).unwrap();
        assert!(result.warnings.is_empty());
        assert_eq!(result.individuals.len(), 2);
        let i = &result.individuals[0];
        assert_eq!(i.iri.as_str(), "http://e/i");
        assert_eq!(i.object_assertions.len(), 1);
        assert_eq!(i.aliases, vec![("en".to_string(), "nick".to_string())]);
        assert_eq!(
            i.external_ids.values().next().map(String::as_str),
            Some("https://www.wikidata.org/wiki/Q1")
        );
        assert_eq!(i.annotations.len(), 1);
        assert_eq!(
            i.annotations.values().next().unwrap()[0].lexical(),
            "survey"
        );
    }

    #[test]
    fn unknown_class_types_produce_a_warning() {
        let doc = doc("ex:i a ex:Mystery .");
        let result = extract_individuals(&doc, &[], &AnnotationRouting::default()).unwrap();
        assert_eq!(result.individuals.len(), 1);
        assert_eq!(result.warnings.len(), 1);
        assert!(result.warnings[0].contains("http://e/i"));
    }

    #[test]
    fn no_type_triples_means_no_individuals() {
        let doc = doc("ex:s ex:p ex:o .");
        let result = extract_individuals(&doc, &[], &AnnotationRouting::default()).unwrap();
        assert!(result.individuals.is_empty());
    }

    #[test]
    fn structural_types_do_not_create_individuals() {
        let doc = doc("ex:C a owl:Class .\nex:p a owl:ObjectProperty .");
        let (classes, _) = extract_schema(&doc).unwrap();
        let result = extract_individuals(&doc, &classes, &AnnotationRouting::default()).unwrap();
        assert!(result.individuals.is_empty());
    }

    #[test]
    fn ambiguous_nodes_appear_in_both_extractions() {
        let doc = doc(
            "ex:C a owl:Class .\n\
             ex:X a owl:Class ; a ex:C .",
        );
        let (classes, _) = extract_schema(&doc).unwrap();
        assert_eq!(classes.len(), 2);
        let result = extract_individuals(&doc, &classes, &AnnotationRouting::default()).unwrap();
        assert_eq!(result.individuals.len(), 1);
        assert_eq!(result.individuals[0].iri.as_str(), "http://e/X");
    }
}
