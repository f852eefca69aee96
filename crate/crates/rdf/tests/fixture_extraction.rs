//! End-to-end checks against the hand-counted aero-mini fixture.

use owlbase_rdf::term::Iri;
use owlbase_rdf::{
    class_import_order, extract_individuals, extract_schema, parse_ontology, serialize_ontology,
    AnnotationRouting, Format,
};

const FIXTURE: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/aero-mini.ttl");

fn aero(local: &str) -> Iri {
    Iri::new(format!("http://example.org/aero#{local}")).unwrap()
}

#[test]
fn fixture_matches_its_hand_count() {
    let content = std::fs::read(FIXTURE).unwrap();
    let doc = parse_ontology(&content, Format::Turtle).unwrap();
    // 3 classes with 3+3+2 statements, 2 property declarations with 2 each,
    // 2 individuals with 4+2 statements
    assert_eq!(doc.triple_count(), 18);

    let (classes, properties) = extract_schema(&doc).unwrap();
    assert_eq!(classes.len(), 3);
    assert_eq!(properties.len(), 2);

    let parent_edges: usize = classes.iter().map(|c| c.parents.len()).sum();
    assert_eq!(parent_edges, 1);
    let design = classes
        .iter()
        .find(|c| c.iri == aero("DesignProcess"))
        .unwrap();
    assert!(design.parents.contains(&aero("Process")));
    assert_eq!(
        design.labels.get("en").map(String::as_str),
        Some("Design process")
    );

    let routing = AnnotationRouting {
        alias_properties: [aero("alias")].into(),
        external_id_properties: Default::default(),
    };
    let result = extract_individuals(&doc, &classes, &routing).unwrap();
    assert!(result.warnings.is_empty());
    assert_eq!(result.individuals.len(), 2);

    let wing = result
        .individuals
        .iter()
        .find(|i| i.iri == aero("wingDesign"))
        .unwrap();
    assert_eq!(wing.labels.get("en").map(String::as_str), Some("Wing design"));
    assert_eq!(
        wing.object_assertions,
        vec![(aero("hasSoftware"), aero("cadTool"))]
    );
    assert_eq!(
        wing.aliases,
        vec![("en".to_string(), "wing dsgn".to_string())]
    );
}

#[test]
fn fixture_class_order_is_parent_first() {
    let content = std::fs::read(FIXTURE).unwrap();
    let doc = parse_ontology(&content, Format::Turtle).unwrap();
    let (classes, _) = extract_schema(&doc).unwrap();
    let ordered = class_import_order(&classes).unwrap();
    let iris: Vec<&str> = ordered.iter().map(|c| c.iri.as_str()).collect();
    let process = iris.iter().position(|i| i.ends_with("#Process")).unwrap();
    let design = iris
        .iter()
        .position(|i| i.ends_with("#DesignProcess"))
        .unwrap();
    assert!(process < design);
}

#[test]
fn fixture_round_trips_through_both_formats() {
    let content = std::fs::read(FIXTURE).unwrap();
    let doc = parse_ontology(&content, Format::Turtle).unwrap();
    for format in [Format::Turtle, Format::RdfXml] {
        let text = serialize_ontology(&doc, format).unwrap();
        let reparsed = parse_ontology(text.as_bytes(), format).unwrap();
        assert!(owlbase_rdf::isomorphic(&doc, &reparsed));
    }
}
