//! The standard check set: construction rules, and soundness plus
//! completeness on a store seeded with one defect per check.

use std::collections::BTreeSet;
use std::path::PathBuf;

use owlbase_model::{wbns, EntityId, MappingDictionary};
use owlbase_qa::{
    build_standard_checks, render_sparql, run_checks, CheckName, PlanTerm, QueryEndpoint, Row,
    Severity,
};
use owlbase_rdf::term::{Literal, Term, Triple};
use owlbase_rdf::vocab;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn default_dict() -> MappingDictionary {
    let text = std::fs::read_to_string(fixture("default-mapping.json")).unwrap();
    owlbase_model::load_mapping(&text).unwrap()
}

fn ids(ns: &[u64]) -> BTreeSet<EntityId> {
    ns.iter().map(|n| EntityId::new(*n)).collect()
}

struct LocalEndpoint(Vec<Triple>);

impl QueryEndpoint for LocalEndpoint {
    fn select(&self, query: &str) -> Result<Vec<Row>, String> {
        let parsed = owlbase_sparql::parse_query(query).map_err(|e| e.to_string())?;
        Ok(owlbase_sparql::evaluate(&parsed, &self.0))
    }
}

fn item(n: u64) -> Term {
    Term::Iri(wbns::entity_iri(EntityId::new(n)))
}

fn direct(p: u64) -> Term {
    Term::Iri(wbns::direct_claim_iri(owlbase_model::PropertyId::new(p)))
}

fn triple(s: &Term, p: &Term, o: Term) -> Triple {
    let node = |t: &Term| t.as_node().expect("subject terms are nodes");
    Triple::new(node(s), p.as_iri().expect("predicate is an IRI").clone(), o)
}

fn label(text: &str) -> Term {
    Term::Literal(Literal::lang(text, "en"))
}

/// Eight entities, one defect per check: Q4 lacks a label, Q5 and Q6
/// share an identifier value, Q2 and Q3 share a label and class, Q7 is a
/// linkless class, Q8 carries an off-vocabulary source annotation.
fn seeded_store() -> Vec<Triple> {
    let typ = Term::Iri(vocab::rdf::type_());
    let item_class = Term::Iri(wbns::wikibase_term("Item"));
    let lbl = Term::Iri(vocab::rdfs::label());
    let mut triples = Vec::new();
    for n in 1..=8 {
        triples.push(triple(&item(n), &typ, item_class.clone()));
    }
    for (n, text) in [
        (1, "Process"),
        (2, "Fan"),
        (3, "Fan"),
        (5, "CAD tool"),
        (6, "CAM tool"),
        (7, "Lonely"),
        (8, "Report"),
    ] {
        triples.push(triple(&item(n), &lbl, label(text)));
    }
    triples.push(triple(&item(2), &direct(1), item(1)));
    triples.push(triple(&item(3), &direct(1), item(1)));
    triples.push(triple(
        &item(5),
        &direct(3),
        Term::Literal(Literal::string("http://example.org/aero#dup")),
    ));
    triples.push(triple(
        &item(6),
        &direct(3),
        Term::Literal(Literal::string("http://example.org/aero#dup")),
    ));
    triples.push(triple(&item(8), &direct(12), Term::Literal(Literal::string("blog post"))));
    triples
}

#[test]
fn default_dictionary_yields_all_five_checks() {
    let checks = build_standard_checks(&default_dict(), &ids(&[1, 7]));
    let names: Vec<CheckName> = checks.iter().map(|c| c.name).collect();
    assert_eq!(
        names,
        vec![
            CheckName::MissingLabel,
            CheckName::DuplicateExternalId,
            CheckName::DuplicateLabel,
            CheckName::OrphanClass,
            CheckName::UnexpectedSourceValue,
        ]
    );
    for check in &checks {
        assert!(check.plan.is_well_formed(), "{} plan is malformed", check.name);
        owlbase_sparql::parse_query(&render_sparql(&check.plan))
            .unwrap_or_else(|e| panic!("{} does not render to parseable SPARQL: {e}", check.name));
    }
    let severities: Vec<Severity> = checks.iter().map(|c| c.severity).collect();
    assert_eq!(
        severities,
        vec![
            Severity::Error,
            Severity::Error,
            Severity::Warning,
            Severity::Error,
            Severity::Warning,
        ]
    );
}

#[test]
fn identifier_check_covers_both_identifying_properties() {
    let checks = build_standard_checks(&default_dict(), &ids(&[1]));
    let dup = checks.iter().find(|c| c.name == CheckName::DuplicateExternalId).unwrap();
    let seeds = dup.plan.bindings_in.as_ref().unwrap();
    assert_eq!(seeds.variable, "prop");
    assert_eq!(seeds.terms, vec![direct(3), direct(13)]);
}

#[test]
fn empty_class_set_omits_the_orphan_check() {
    let checks = build_standard_checks(&default_dict(), &BTreeSet::new());
    assert_eq!(checks.len(), 4);
    assert!(checks.iter().all(|c| c.name != CheckName::OrphanClass));
}

#[test]
fn orphan_seeds_are_the_given_classes_in_order() {
    let checks = build_standard_checks(&default_dict(), &ids(&[9, 2, 5]));
    let orphan = checks.iter().find(|c| c.name == CheckName::OrphanClass).unwrap();
    let seeds = orphan.plan.bindings_in.as_ref().unwrap();
    assert_eq!(seeds.terms, vec![item(2), item(5), item(9)]);
    assert!(orphan.plan.patterns.is_empty());
    assert_eq!(orphan.plan.negations.len(), 3);
}

#[test]
fn label_checks_use_the_label_predicate_directly() {
    let checks = build_standard_checks(&default_dict(), &ids(&[1]));
    let missing = checks.iter().find(|c| c.name == CheckName::MissingLabel).unwrap();
    let negated = &missing.plan.negations[0][0];
    assert_eq!(negated.predicate, PlanTerm::Const(Term::Iri(vocab::rdfs::label())));
}

#[test]
fn seeded_defects_are_each_reported_exactly_once() {
    let checks = build_standard_checks(&default_dict(), &ids(&[1, 7]));
    let endpoint = LocalEndpoint(seeded_store());
    let findings = run_checks(&checks, &endpoint).unwrap();
    assert_eq!(findings.len(), 5, "findings: {findings:?}");

    let by_check: Vec<(CheckName, &[EntityId])> = findings
        .iter()
        .map(|f| (f.check, f.subjects.as_slice()))
        .collect();
    assert_eq!(
        by_check,
        vec![
            (CheckName::MissingLabel, &[EntityId::new(4)][..]),
            (CheckName::DuplicateExternalId, &[EntityId::new(5), EntityId::new(6)][..]),
            (CheckName::DuplicateLabel, &[EntityId::new(2), EntityId::new(3)][..]),
            (CheckName::OrphanClass, &[EntityId::new(7)][..]),
            (CheckName::UnexpectedSourceValue, &[EntityId::new(8)][..]),
        ]
    );
    let dup = &findings[1];
    assert!(dup.detail.contains("http://example.org/aero#dup"), "{}", dup.detail);
    let source = &findings[4];
    assert!(source.detail.contains("blog post"), "{}", source.detail);
}

#[test]
fn a_clean_store_yields_no_findings() {
    let typ = Term::Iri(vocab::rdf::type_());
    let item_class = Term::Iri(wbns::wikibase_term("Item"));
    let lbl = Term::Iri(vocab::rdfs::label());
    let mut triples = Vec::new();
    for (n, text) in [(1, "Process"), (2, "Fan"), (3, "Blade")] {
        triples.push(triple(&item(n), &typ, item_class.clone()));
        triples.push(triple(&item(n), &lbl, label(text)));
    }
    triples.push(triple(&item(2), &direct(1), item(1)));
    triples.push(triple(&item(3), &direct(1), item(1)));
    for n in 1..=3u64 {
        triples.push(triple(
            &item(n),
            &direct(3),
            Term::Literal(Literal::string(format!("http://example.org/aero#e{n}"))),
        ));
    }
    triples.push(triple(&item(2), &direct(12), Term::Literal(Literal::string("survey"))));

    let checks = build_standard_checks(&default_dict(), &ids(&[1]));
    let endpoint = LocalEndpoint(triples);
    let findings = run_checks(&checks, &endpoint).unwrap();
    assert!(findings.is_empty(), "unexpected findings: {findings:?}");
}

#[test]
fn endpoint_failures_carry_the_check_name() {
    struct Failing;
    impl QueryEndpoint for Failing {
        fn select(&self, _query: &str) -> Result<Vec<Row>, String> {
            Err("connection refused".to_owned())
        }
    }
    let checks = build_standard_checks(&default_dict(), &BTreeSet::new());
    let err = run_checks(&checks, &Failing).unwrap_err();
    let text = err.to_string();
    assert!(text.contains("missing-label"), "{text}");
    assert!(text.contains("connection refused"), "{text}");
}
