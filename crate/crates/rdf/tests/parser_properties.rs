//! Randomized properties: serialization round trips, extraction against a
//! brute-force oracle, and topological validity of the class order.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use owlbase_rdf::term::{Iri, Literal, Node, Term, Triple};
use owlbase_rdf::vocab;
use owlbase_rdf::{
    class_import_order, extract_individuals, extract_schema, isomorphic, ntriples, rdfxml, turtle,
    AnnotationRouting, ClassDef, OntologyDocument,
};

fn iri(s: &str) -> Iri {
    Iri::new(s).unwrap()
}

// ---- generators ----

fn domain_iri() -> impl Strategy<Value = Iri> {
    (0u8..10).prop_map(|i| iri(&format!("http://t.example/x#n{i}")))
}

fn wild_iri() -> impl Strategy<Value = Iri> {
    prop_oneof![
        domain_iri(),
        "[ -~]{0,10}".prop_map(|s| iri(&format!("urn:t:{s}"))),
        Just(iri("http://t.example/x#sp ace")),
    ]
}

fn lexical() -> impl Strategy<Value = String> {
    prop_oneof![
        "[ -~]{0,12}",
        Just("line1\nline2".to_string()),
        Just("quote\" back\\slash\ttab".to_string()),
    ]
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        lexical().prop_map(Literal::string),
        (lexical(), "[a-z]{2}").prop_map(|(v, t)| Literal::lang(v, t)),
        lexical().prop_map(|v| Literal::typed(v, vocab::xsd::integer()).unwrap()),
        lexical().prop_map(|v| Literal::typed(v, vocab::xsd::date_time()).unwrap()),
    ]
}

fn blank() -> impl Strategy<Value = String> {
    (0u8..4).prop_map(|i| format!("b{i}"))
}

fn node() -> impl Strategy<Value = Node> {
    prop_oneof![
        3 => wild_iri().prop_map(Node::Iri),
        1 => blank().prop_map(Node::Blank),
    ]
}

fn term() -> impl Strategy<Value = Term> {
    prop_oneof![
        2 => wild_iri().prop_map(Term::Iri),
        1 => blank().prop_map(Term::Blank),
        2 => literal().prop_map(Term::Literal),
    ]
}

fn document() -> impl Strategy<Value = OntologyDocument> {
    prop::collection::vec((node(), wild_iri(), term()), 0..25).prop_map(|triples| {
        let mut doc: OntologyDocument = triples
            .into_iter()
            .map(|(s, p, o)| Triple::new(s, p, o))
            .collect();
        doc.prefix_map
            .insert("ex".to_string(), iri("http://t.example/x#"));
        doc
    })
}

/// Terms restricted to what the RDF/XML writer can represent losslessly.
fn xml_document() -> impl Strategy<Value = OntologyDocument> {
    let pred = (0u8..6).prop_map(|i| iri(&format!("http://t.example/x#p{i}")));
    let obj = prop_oneof![
        domain_iri().prop_map(Term::Iri),
        blank().prop_map(Term::Blank),
        "[ -~]{0,12}".prop_map(|v| Literal::string(v).into()),
        ("[ -~]{0,12}", "[a-z]{2}").prop_map(|(v, t)| Literal::lang(v, t).into()),
        "[ -~]{0,12}".prop_map(|v| Term::Literal(
            Literal::typed(v, vocab::xsd::integer()).unwrap()
        )),
    ];
    let subj = prop_oneof![
        3 => domain_iri().prop_map(Node::Iri),
        1 => blank().prop_map(Node::Blank),
    ];
    prop::collection::vec((subj, pred, obj), 0..25).prop_map(|triples| {
        triples
            .into_iter()
            .map(|(s, p, o)| Triple::new(s, p, o))
            .collect()
    })
}

proptest! {
    #[test]
    fn turtle_round_trip_preserves_the_graph(doc in document()) {
        let text = turtle::write(&doc);
        let reparsed = turtle::parse(&text).unwrap_or_else(|e| panic!("{e}\n---\n{text}"));
        prop_assert!(isomorphic(&doc, &reparsed), "not isomorphic:\n{text}");
    }

    #[test]
    fn ntriples_round_trip_preserves_the_graph(doc in document()) {
        let text = ntriples::write_canonical(&doc);
        let reparsed = ntriples::parse(&text).unwrap_or_else(|e| panic!("{e}\n---\n{text}"));
        prop_assert!(isomorphic(&doc, &reparsed), "not isomorphic:\n{text}");
    }

    #[test]
    fn rdfxml_round_trip_preserves_the_graph(doc in xml_document()) {
        let text = rdfxml::write(&doc).unwrap();
        let reparsed = rdfxml::parse(&text).unwrap_or_else(|e| panic!("{e}\n---\n{text}"));
        prop_assert!(isomorphic(&doc, &reparsed), "not isomorphic:\n{text}");
    }

    #[test]
    fn canonical_ntriples_is_stable_across_insertion_order(doc in document()) {
        let mut triples: Vec<Triple> = doc.triples().cloned().collect();
        triples.reverse();
        let shuffled: OntologyDocument = triples.into_iter().collect();
        prop_assert_eq!(
            ntriples::write_canonical(&doc),
            ntriples::write_canonical(&shuffled)
        );
    }
}

// ---- extraction oracle ----

fn schema_triple() -> impl Strategy<Value = Triple> {
    let subject = (0u8..8).prop_map(|i| iri(&format!("http://t.example/x#s{i}")));
    let pred = prop_oneof![
        Just(vocab::rdf::type_()),
        Just(vocab::rdfs::label()),
        Just(vocab::rdfs::comment()),
        Just(vocab::rdfs::sub_class_of()),
        (0u8..3).prop_map(|i| iri(&format!("http://t.example/x#p{i}"))),
        Just(iri("http://t.example/x#alias")),
        Just(iri("http://t.example/x#xid")),
    ];
    let object = prop_oneof![
        Just(Term::Iri(vocab::owl::class())),
        Just(Term::Iri(vocab::rdfs::class())),
        Just(Term::Iri(vocab::owl::object_property())),
        Just(Term::Iri(vocab::owl::annotation_property())),
        Just(Term::Iri(vocab::owl::datatype_property())),
        Just(Term::Iri(vocab::owl::named_individual())),
        (0u8..8).prop_map(|i| Term::Iri(iri(&format!("http://t.example/x#s{i}")))),
        ("[a-z]{0,6}").prop_map(|v| Term::Literal(Literal::string(v))),
        ("[a-z]{0,6}", "[a-z]{2}").prop_map(|(v, t)| Term::Literal(Literal::lang(v, t))),
    ];
    (subject, pred, object).prop_map(|(s, p, o)| Triple::new(Node::Iri(s), p, o))
}

fn routing() -> AnnotationRouting {
    AnnotationRouting {
        alias_properties: [iri("http://t.example/x#alias")].into(),
        external_id_properties: [iri("http://t.example/x#xid")].into(),
    }
}

/// Independent reimplementation of the extraction rules as linear scans.
mod oracle {
    use super::*;

    pub fn class_iris(doc: &OntologyDocument) -> BTreeSet<Iri> {
        doc.triples()
            .filter(|t| t.predicate == vocab::rdf::type_())
            .filter(|t| {
                t.object == Term::Iri(vocab::owl::class())
                    || t.object == Term::Iri(vocab::rdfs::class())
            })
            .filter_map(|t| t.subject.as_iri().cloned())
            .collect()
    }

    pub fn texts(doc: &OntologyDocument, subject: &Iri, pred: &Iri) -> BTreeMap<String, String> {
        let mut per_lang: BTreeMap<String, BTreeSet<Literal>> = BTreeMap::new();
        for t in doc.triples() {
            if t.subject != Node::Iri(subject.clone()) || t.predicate != *pred {
                continue;
            }
            if let Term::Literal(lit) = &t.object {
                let lang = lit.language().unwrap_or("en").to_string();
                per_lang.entry(lang).or_default().insert(lit.clone());
            }
        }
        per_lang
            .into_iter()
            .map(|(lang, lits)| {
                let first = lits.iter().next().unwrap();
                (lang, first.lexical().to_string())
            })
            .collect()
    }

    pub fn individual_types(doc: &OntologyDocument) -> BTreeMap<Iri, BTreeSet<Iri>> {
        let mut out: BTreeMap<Iri, BTreeSet<Iri>> = BTreeMap::new();
        for t in doc.triples() {
            if t.predicate != vocab::rdf::type_() {
                continue;
            }
            let (Node::Iri(s), Term::Iri(o)) = (&t.subject, &t.object) else {
                continue;
            };
            if !o.is_structural_vocab() {
                out.entry(s.clone()).or_default().insert(o.clone());
            }
        }
        out
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn extraction_matches_the_brute_force_oracle(
        triples in prop::collection::vec(schema_triple(), 0..50)
    ) {
        let doc: OntologyDocument = triples.into_iter().collect();
        let (classes, properties) = extract_schema(&doc).unwrap();

        // class set and per-class fields
        let expected_classes = oracle::class_iris(&doc);
        let got: BTreeSet<Iri> = classes.iter().map(|c| c.iri.clone()).collect();
        prop_assert_eq!(&got, &expected_classes);
        for class in &classes {
            prop_assert_eq!(&class.labels, &oracle::texts(&doc, &class.iri, &vocab::rdfs::label()));
            prop_assert_eq!(
                &class.description,
                &oracle::texts(&doc, &class.iri, &vocab::rdfs::comment())
            );
            let expected_parents: BTreeSet<Iri> = doc
                .triples()
                .filter(|t| t.subject == Node::Iri(class.iri.clone()))
                .filter(|t| t.predicate == vocab::rdfs::sub_class_of())
                .filter_map(|t| t.object.as_iri().cloned())
                .filter(|p| *p != class.iri)
                .collect();
            prop_assert_eq!(&class.parents, &expected_parents);
        }

        // properties carry the declared kind
        for p in &properties {
            let declared = Triple::new(
                Node::Iri(p.iri.clone()),
                vocab::rdf::type_(),
                Term::Iri(match p.kind {
                    owlbase_rdf::PropertyKind::Object => vocab::owl::object_property(),
                    owlbase_rdf::PropertyKind::Annotation => vocab::owl::annotation_property(),
                    owlbase_rdf::PropertyKind::Datatype => vocab::owl::datatype_property(),
                }),
            );
            prop_assert!(doc.contains(&declared));
        }

        // individuals: subjects with a non-structural type
        let routing = routing();
        let result = extract_individuals(&doc, &classes, &routing).unwrap();
        let expected_types = oracle::individual_types(&doc);
        prop_assert_eq!(result.individuals.len(), expected_types.len());
        for ind in &result.individuals {
            let types = &expected_types[&ind.iri];
            prop_assert_eq!(&ind.types, types);
            prop_assert!(!ind.types.is_empty());

            // object assertions: IRI objects of unrouted domain predicates
            let mut expected_assertions: Vec<(Iri, Iri)> = doc
                .triples()
                .filter(|t| t.subject == Node::Iri(ind.iri.clone()))
                .filter(|t| !t.predicate.is_structural_vocab())
                .filter(|t| !routing.alias_properties.contains(&t.predicate))
                .filter(|t| !routing.external_id_properties.contains(&t.predicate))
                .filter_map(|t| t.object.as_iri().map(|o| (t.predicate.clone(), o.clone())))
                .collect();
            expected_assertions.sort();
            expected_assertions.dedup();
            let mut got_assertions = ind.object_assertions.clone();
            got_assertions.sort();
            prop_assert_eq!(&got_assertions, &expected_assertions);

            // aliases: routed literals, deduplicated per (language, value)
            let expected_aliases: BTreeSet<(String, String)> = doc
                .triples()
                .filter(|t| t.subject == Node::Iri(ind.iri.clone()))
                .filter(|t| routing.alias_properties.contains(&t.predicate))
                .filter_map(|t| t.object.as_literal())
                .map(|lit| (lit.language().unwrap_or("en").to_string(), lit.lexical().to_string()))
                .collect();
            let got_aliases: BTreeSet<(String, String)> = ind.aliases.iter().cloned().collect();
            prop_assert_eq!(got_aliases.len(), ind.aliases.len(), "duplicate aliases");
            prop_assert_eq!(&got_aliases, &expected_aliases);

            // external ids: the first value (in triple order) per routed property
            let mut expected_ids: BTreeMap<Iri, String> = BTreeMap::new();
            for t in doc.triples() {
                if t.subject != Node::Iri(ind.iri.clone())
                    || !routing.external_id_properties.contains(&t.predicate)
                {
                    continue;
                }
                let value = match &t.object {
                    Term::Iri(v) => v.as_str().to_string(),
                    Term::Literal(lit) => lit.lexical().to_string(),
                    Term::Blank(_) => continue,
                };
                expected_ids.entry(t.predicate.clone()).or_insert(value);
            }
            prop_assert_eq!(&ind.external_ids, &expected_ids);
        }

        // warnings name exactly the individuals with no known type
        let known: BTreeSet<&Iri> = classes.iter().map(|c| &c.iri).collect();
        let expected_warned: Vec<&Iri> = expected_types
            .iter()
            .filter(|(_, types)| types.iter().all(|t| !known.contains(t)))
            .map(|(iri, _)| iri)
            .collect();
        prop_assert_eq!(result.warnings.len(), expected_warned.len());
        for (warning, iri) in result.warnings.iter().zip(expected_warned) {
            prop_assert!(warning.contains(iri.as_str()));
        }
    }
}

// ---- ordering properties ----

fn class_forest() -> impl Strategy<Value = Vec<ClassDef>> {
    // parents always point at a lower index, so the graph is acyclic
    prop::collection::vec(prop::collection::vec(any::<prop::sample::Index>(), 0..3), 1..20)
        .prop_map(|parent_picks| {
            parent_picks
                .into_iter()
                .enumerate()
                .map(|(i, picks)| {
                    let parents: BTreeSet<Iri> = if i == 0 {
                        BTreeSet::new()
                    } else {
                        picks
                            .into_iter()
                            .map(|pick| {
                                let j = pick.index(i);
                                iri(&format!("http://t.example/x#c{j}"))
                            })
                            .collect()
                    };
                    ClassDef {
                        iri: iri(&format!("http://t.example/x#c{i}")),
                        labels: BTreeMap::new(),
                        description: BTreeMap::new(),
                        parents,
                        annotations: BTreeMap::new(),
                    }
                })
                .collect()
        })
}

proptest! {
    #[test]
    fn import_order_is_topological_and_subset_closed(classes in class_forest()) {
        let ordered = class_import_order(&classes).unwrap();
        prop_assert_eq!(ordered.len(), classes.len());
        let position: BTreeMap<&Iri, usize> = ordered
            .iter()
            .enumerate()
            .map(|(i, c)| (&c.iri, i))
            .collect();
        for class in &ordered {
            for parent in &class.parents {
                if let Some(pp) = position.get(parent) {
                    prop_assert!(pp < &position[&class.iri]);
                }
            }
        }

        // any parent-closed subset keeps a valid order when filtered
        let half: BTreeSet<&Iri> = classes.iter().take(classes.len() / 2).map(|c| &c.iri).collect();
        let mut closed: BTreeSet<&Iri> = half;
        loop {
            let grown: BTreeSet<&Iri> = closed
                .iter()
                .flat_map(|iri| {
                    classes
                        .iter()
                        .find(|c| &c.iri == *iri)
                        .into_iter()
                        .flat_map(|c| c.parents.iter())
                })
                .filter(|p| classes.iter().any(|c| &c.iri == *p))
                .chain(closed.iter().copied())
                .collect();
            if grown.len() == closed.len() {
                break;
            }
            closed = grown;
        }
        let filtered: Vec<&ClassDef> = ordered.iter().filter(|c| closed.contains(&c.iri)).collect();
        let mut seen: BTreeSet<&Iri> = BTreeSet::new();
        for class in filtered {
            for parent in &class.parents {
                if closed.contains(parent) {
                    prop_assert!(seen.contains(parent));
                }
            }
            seen.insert(&class.iri);
        }
    }
}
