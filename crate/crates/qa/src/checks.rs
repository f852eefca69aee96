//! The five standard quality checks and their execution against any
//! SPARQL-capable endpoint.

use std::collections::BTreeSet;
use std::fmt;

use owlbase_model::dict::MappingKind;
use owlbase_model::{wbns, EntityId, MappingDictionary, SOURCE_VOCABULARY};
use owlbase_rdf::term::{Literal, Term};
use owlbase_rdf::vocab;
use serde::{Deserialize, Serialize};

use crate::error::QaError;
use crate::plan::{
    render_sparql, PlanFilter, PlanOp, PlanOperand, PlanPattern, PlanTerm, QueryPlan, Row,
    SeedBindings,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckName {
    MissingLabel,
    DuplicateExternalId,
    DuplicateLabel,
    OrphanClass,
    UnexpectedSourceValue,
}

impl fmt::Display for CheckName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CheckName::MissingLabel => "missing-label",
            CheckName::DuplicateExternalId => "duplicate-external-id",
            CheckName::DuplicateLabel => "duplicate-label",
            CheckName::OrphanClass => "orphan-class",
            CheckName::UnexpectedSourceValue => "unexpected-source-value",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Error,
    Warning,
}

impl CheckName {
    /// The default severity for each check: structural integrity defects
    /// are errors, plausible-content defects are warnings.
    pub fn default_severity(self) -> Severity {
        match self {
            CheckName::MissingLabel | CheckName::DuplicateExternalId | CheckName::OrphanClass => {
                Severity::Error
            }
            CheckName::DuplicateLabel | CheckName::UnexpectedSourceValue => Severity::Warning,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualityCheck {
    pub name: CheckName,
    pub severity: Severity,
    pub plan: QueryPlan,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QualityFinding {
    pub check: CheckName,
    pub severity: Severity,
    pub subjects: Vec<EntityId>,
    pub detail: String,
}

fn var(name: &str) -> PlanTerm {
    PlanTerm::Var(name.to_owned())
}

fn iri_const(iri: owlbase_rdf::Iri) -> PlanTerm {
    PlanTerm::Const(Term::Iri(iri))
}

fn pattern(subject: PlanTerm, predicate: PlanTerm, object: PlanTerm) -> PlanPattern {
    PlanPattern { subject, predicate, object }
}

/// Build the standard checks for a dictionary and the set of class item
/// ids known to the ingestion cache.
///
/// The orphan-class check is seeded with the class ids and omitted when
/// the set is empty; the source-vocabulary check is omitted when the
/// dictionary has no "source" annotation entry.
pub fn build_standard_checks(
    dict: &MappingDictionary,
    class_ids: &BTreeSet<EntityId>,
) -> Vec<QualityCheck> {
    let mut checks = Vec::new();
    let instance_of = wbns::direct_claim_iri(dict.instance_of().property);
    let subclass_of = wbns::direct_claim_iri(dict.subclass_of().property);

    // items with no label at all. Within this pipeline an item's first
    // label is always the dictionary's label language, so "no label" and
    // "no label in the label language" coincide on stores it created.
    checks.push(QualityCheck {
        name: CheckName::MissingLabel,
        severity: CheckName::MissingLabel.default_severity(),
        plan: QueryPlan {
            patterns: vec![pattern(
                var("item"),
                iri_const(vocab::rdf::type_()),
                iri_const(wbns::wikibase_term("Item")),
            )],
            negations: vec![vec![pattern(
                var("item"),
                iri_const(vocab::rdfs::label()),
                var("label"),
            )]],
            filters: vec![],
            bindings_in: None,
            projection: vec!["item".to_owned()],
            distinct: false,
            limit: None,
        },
    });

    // pairs of items sharing an identifying external-id value; the
    // identifying properties are seeded through VALUES over the predicate
    let mut id_props: Vec<Term> = Vec::new();
    id_props.push(Term::Iri(wbns::direct_claim_iri(dict.ontology_iri().property)));
    if let Some(entry) = dict
        .entries()
        .find(|e| e.kind == MappingKind::ExternalId && e.name == "wikidata uri")
    {
        id_props.push(Term::Iri(wbns::direct_claim_iri(entry.property)));
    }
    checks.push(QualityCheck {
        name: CheckName::DuplicateExternalId,
        severity: CheckName::DuplicateExternalId.default_severity(),
        plan: QueryPlan {
            patterns: vec![
                pattern(var("a"), var("prop"), var("value")),
                pattern(var("b"), var("prop"), var("value")),
            ],
            negations: vec![],
            filters: vec![PlanFilter {
                lhs: PlanOperand::Str("a".to_owned()),
                op: PlanOp::Lt,
                rhs: PlanOperand::Str("b".to_owned()),
            }],
            bindings_in: Some(SeedBindings { variable: "prop".to_owned(), terms: id_props }),
            projection: vec!["a".to_owned(), "b".to_owned(), "value".to_owned()],
            distinct: true,
            limit: None,
        },
    });

    // distinct items sharing a label and an instance-of target
    checks.push(QualityCheck {
        name: CheckName::DuplicateLabel,
        severity: CheckName::DuplicateLabel.default_severity(),
        plan: QueryPlan {
            patterns: vec![
                pattern(var("a"), iri_const(vocab::rdfs::label()), var("label")),
                pattern(var("b"), iri_const(vocab::rdfs::label()), var("label")),
                pattern(var("a"), iri_const(instance_of.clone()), var("class")),
                pattern(var("b"), iri_const(instance_of.clone()), var("class")),
            ],
            negations: vec![],
            filters: vec![PlanFilter {
                lhs: PlanOperand::Str("a".to_owned()),
                op: PlanOp::Lt,
                rhs: PlanOperand::Str("b".to_owned()),
            }],
            bindings_in: None,
            projection: vec!["a".to_owned(), "b".to_owned(), "label".to_owned()],
            distinct: true,
            limit: None,
        },
    });

    // known classes with no hierarchy links at all
    if !class_ids.is_empty() {
        checks.push(QualityCheck {
            name: CheckName::OrphanClass,
            severity: CheckName::OrphanClass.default_severity(),
            plan: QueryPlan {
                patterns: vec![],
                negations: vec![
                    vec![pattern(var("class"), iri_const(subclass_of.clone()), var("parent"))],
                    vec![pattern(var("inst"), iri_const(instance_of.clone()), var("class"))],
                    vec![pattern(var("sub"), iri_const(subclass_of.clone()), var("class"))],
                ],
                filters: vec![],
                bindings_in: Some(SeedBindings {
                    variable: "class".to_owned(),
                    terms: class_ids
                        .iter()
                        .map(|id| Term::Iri(wbns::entity_iri(*id)))
                        .collect(),
                }),
                projection: vec!["class".to_owned()],
                distinct: false,
                limit: None,
            },
        });
    }

    // source annotations outside the recommended vocabulary
    if let Some(entry) = dict
        .entries()
        .find(|e| e.kind == MappingKind::Annotation && e.name == "source")
    {
        let source_prop = wbns::direct_claim_iri(entry.property);
        checks.push(QualityCheck {
            name: CheckName::UnexpectedSourceValue,
            severity: CheckName::UnexpectedSourceValue.default_severity(),
            plan: QueryPlan {
                patterns: vec![pattern(var("item"), iri_const(source_prop), var("value"))],
                negations: vec![],
                filters: SOURCE_VOCABULARY
                    .iter()
                    .map(|expected| PlanFilter {
                        lhs: PlanOperand::Str("value".to_owned()),
                        op: PlanOp::Ne,
                        rhs: PlanOperand::Const(Term::Literal(Literal::string(*expected))),
                    })
                    .collect(),
                bindings_in: None,
                projection: vec!["item".to_owned(), "value".to_owned()],
                distinct: false,
                limit: None,
            },
        });
    }

    checks
}

/// Anything able to answer a SELECT in the supported subset.
pub trait QueryEndpoint {
    /// Run the query, returning one map per row. Errors are transport or
    /// endpoint failures, described as text.
    fn select(&self, query: &str) -> Result<Vec<Row>, String>;
}

/// Execute every check and collect findings, sorted by (check, subjects)
/// for deterministic reports.
pub fn run_checks(
    checks: &[QualityCheck],
    endpoint: &dyn QueryEndpoint,
) -> Result<Vec<QualityFinding>, QaError> {
    let mut findings = Vec::new();
    for check in checks {
        let query = render_sparql(&check.plan);
        let rows = endpoint.select(&query).map_err(|message| QaError::Endpoint {
            check: check.name.to_string(),
            message,
        })?;
        for row in rows {
            if let Some(finding) = finding_from_row(check, &row) {
                findings.push(finding);
            }
        }
    }
    findings.sort();
    findings.dedup();
    Ok(findings)
}

/// Translate one result row into a finding. Rows whose subject columns do
/// not decode as entity ids are ignored; the five standard plans always
/// project entity IRIs for their subjects.
pub fn finding_from_row(check: &QualityCheck, row: &Row) -> Option<QualityFinding> {
    let entity = |v: &str| -> Option<EntityId> {
        row.get(v).and_then(|t| t.as_iri()).and_then(wbns::entity_id_of)
    };
    let text = |v: &str| -> String {
        match row.get(v) {
            Some(Term::Literal(lit)) => lit.lexical().to_owned(),
            Some(Term::Iri(iri)) => iri.as_str().to_owned(),
            Some(Term::Blank(b)) => b.clone(),
            None => String::new(),
        }
    };
    let (subjects, detail) = match check.name {
        CheckName::MissingLabel => {
            (vec![entity("item")?], "item has no label".to_owned())
        }
        CheckName::DuplicateExternalId => (
            vec![entity("a")?, entity("b")?],
            format!("items share the external identifier value \"{}\"", text("value")),
        ),
        CheckName::DuplicateLabel => (
            vec![entity("a")?, entity("b")?],
            format!("items share the label \"{}\" and an instance-of target", text("label")),
        ),
        CheckName::OrphanClass => (
            vec![entity("class")?],
            "class has no subclass links and no instances".to_owned(),
        ),
        CheckName::UnexpectedSourceValue => (
            vec![entity("item")?],
            format!("source value \"{}\" is outside the recommended vocabulary", text("value")),
        ),
    };
    Some(QualityFinding {
        check: check.name,
        severity: check.severity,
        subjects,
        detail,
    })
}
