//! The endpoint-agnostic query plan: a tiny relational IR that renders to
//! SPARQL for real endpoints and interprets directly over a triple slice.
//!
//! Keeping both routes alive is the point: every check is exercised as
//! rendered text against an endpoint and as a direct interpretation, and
//! tests hold the two equal.

use std::collections::BTreeMap;

use owlbase_rdf::ntriples::term_text;
use owlbase_rdf::term::{Term, Triple};

/// One position of a plan pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanTerm {
    Var(String),
    Const(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanPattern {
    pub subject: PlanTerm,
    pub predicate: PlanTerm,
    pub object: PlanTerm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlanOp {
    Eq,
    Ne,
    Lt,
}

/// Filter operand; `Str` wraps the variable in STR() for comparison by
/// string form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanOperand {
    Var(String),
    Str(String),
    Const(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanFilter {
    pub lhs: PlanOperand,
    pub op: PlanOp,
    pub rhs: PlanOperand,
}

/// A VALUES-style seed set over one variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedBindings {
    pub variable: String,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPlan {
    pub patterns: Vec<PlanPattern>,
    /// Pattern groups whose absence is required (FILTER NOT EXISTS).
    pub negations: Vec<Vec<PlanPattern>>,
    pub filters: Vec<PlanFilter>,
    pub bindings_in: Option<SeedBindings>,
    pub projection: Vec<String>,
    pub distinct: bool,
    pub limit: Option<usize>,
}

impl QueryPlan {
    /// Check the structural invariant: every projected variable occurs in
    /// the patterns or the seed bindings.
    pub fn is_well_formed(&self) -> bool {
        self.projection.iter().all(|v| {
            self.bindings_in.as_ref().is_some_and(|s| &s.variable == v)
                || self.patterns.iter().any(|p| p.mentions(v))
        })
    }
}

impl PlanPattern {
    fn mentions(&self, var: &str) -> bool {
        [&self.subject, &self.predicate, &self.object]
            .iter()
            .any(|t| matches!(t, PlanTerm::Var(v) if v == var))
    }
}

/// Render the plan as a SPARQL 1.1 SELECT over the supported subset.
/// Output is deterministic: clauses appear in plan order.
pub fn render_sparql(plan: &QueryPlan) -> String {
    debug_assert!(plan.is_well_formed());
    let mut q = String::from("SELECT ");
    if plan.distinct {
        q.push_str("DISTINCT ");
    }
    for var in &plan.projection {
        q.push('?');
        q.push_str(var);
        q.push(' ');
    }
    q.push_str("WHERE { ");
    if let Some(seed) = &plan.bindings_in {
        q.push_str(&format!("VALUES ?{} {{ ", seed.variable));
        for term in &seed.terms {
            q.push_str(&term_text(term));
            q.push(' ');
        }
        q.push_str("} ");
    }
    for pattern in &plan.patterns {
        q.push_str(&render_pattern(pattern));
        q.push_str(" . ");
    }
    for group in &plan.negations {
        q.push_str("FILTER NOT EXISTS { ");
        for pattern in group {
            q.push_str(&render_pattern(pattern));
            q.push_str(" . ");
        }
        q.push_str("} ");
    }
    for filter in &plan.filters {
        q.push_str(&format!(
            "FILTER({} {} {}) ",
            render_operand(&filter.lhs),
            match filter.op {
                PlanOp::Eq => "=",
                PlanOp::Ne => "!=",
                PlanOp::Lt => "<",
            },
            render_operand(&filter.rhs),
        ));
    }
    q.push('}');
    if let Some(limit) = plan.limit {
        q.push_str(&format!(" LIMIT {limit}"));
    }
    q
}

fn render_pattern(pattern: &PlanPattern) -> String {
    format!(
        "{} {} {}",
        render_term(&pattern.subject),
        render_term(&pattern.predicate),
        render_term(&pattern.object)
    )
}

fn render_term(term: &PlanTerm) -> String {
    match term {
        PlanTerm::Var(v) => format!("?{v}"),
        PlanTerm::Const(t) => term_text(t),
    }
}

fn render_operand(operand: &PlanOperand) -> String {
    match operand {
        PlanOperand::Var(v) => format!("?{v}"),
        PlanOperand::Str(v) => format!("STR(?{v})"),
        PlanOperand::Const(t) => term_text(t),
    }
}

/// One result row.
pub type Row = BTreeMap<String, Term>;

/// Interpret the plan directly over a triple slice, bypassing SPARQL
/// entirely. Semantics mirror the rendered query under bag semantics.
pub fn interpret(plan: &QueryPlan, triples: &[Triple]) -> Vec<Row> {
    let mut solutions: Vec<Row> = vec![Row::new()];

    if let Some(seed) = &plan.bindings_in {
        solutions = seed
            .terms
            .iter()
            .map(|t| {
                let mut row = Row::new();
                row.insert(seed.variable.clone(), t.clone());
                row
            })
            .collect();
    }

    for pattern in &plan.patterns {
        let mut next = Vec::new();
        for solution in &solutions {
            for triple in triples {
                if let Some(extended) = match_pattern(pattern, triple, solution) {
                    next.push(extended);
                }
            }
        }
        solutions = next;
    }

    solutions.retain(|row| {
        plan.filters.iter().all(|f| filter_holds(f, row))
            && plan
                .negations
                .iter()
                .all(|group| !group_matches(group, row, triples))
    });

    let mut rows: Vec<Row> = solutions
        .into_iter()
        .map(|solution| {
            plan.projection
                .iter()
                .filter_map(|v| solution.get(v).map(|t| (v.clone(), t.clone())))
                .collect()
        })
        .collect();
    if plan.distinct {
        let mut seen = std::collections::BTreeSet::new();
        rows.retain(|r| seen.insert(r.clone()));
    }
    if let Some(limit) = plan.limit {
        rows.truncate(limit);
    }
    rows
}

/// Whether the negation group has at least one solution extending `row`.
fn group_matches(group: &[PlanPattern], row: &Row, triples: &[Triple]) -> bool {
    let mut solutions = vec![row.clone()];
    for pattern in group {
        let mut next = Vec::new();
        for solution in &solutions {
            for triple in triples {
                if let Some(extended) = match_pattern(pattern, triple, solution) {
                    next.push(extended);
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        solutions = next;
    }
    !solutions.is_empty()
}

fn match_pattern(pattern: &PlanPattern, triple: &Triple, row: &Row) -> Option<Row> {
    let mut next = row.clone();
    bind(&pattern.subject, &Term::from(triple.subject.clone()), &mut next)?;
    bind(&pattern.predicate, &Term::Iri(triple.predicate.clone()), &mut next)?;
    bind(&pattern.object, &triple.object, &mut next)?;
    Some(next)
}

fn bind(pattern: &PlanTerm, term: &Term, row: &mut Row) -> Option<()> {
    match pattern {
        PlanTerm::Var(v) => match row.get(v) {
            Some(bound) if bound == term => Some(()),
            Some(_) => None,
            None => {
                row.insert(v.clone(), term.clone());
                Some(())
            }
        },
        PlanTerm::Const(c) => (c == term).then_some(()),
    }
}

fn string_form(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri.as_str().to_owned(),
        Term::Blank(b) => b.clone(),
        Term::Literal(lit) => lit.lexical().to_owned(),
    }
}

fn filter_holds(filter: &PlanFilter, row: &Row) -> bool {
    enum V {
        Term(Term),
        Str(String),
    }
    let value = |op: &PlanOperand| -> Option<V> {
        match op {
            PlanOperand::Var(v) => row.get(v).cloned().map(V::Term),
            PlanOperand::Str(v) => row.get(v).map(|t| V::Str(string_form(t))),
            PlanOperand::Const(t) => Some(V::Term(t.clone())),
        }
    };
    let Some(lhs) = value(&filter.lhs) else { return false };
    let Some(rhs) = value(&filter.rhs) else { return false };
    match (lhs, rhs) {
        (V::Term(a), V::Term(b)) => match filter.op {
            PlanOp::Eq => a == b,
            PlanOp::Ne => a != b,
            PlanOp::Lt => string_form(&a) < string_form(&b),
        },
        (a, b) => {
            let a = match a {
                V::Str(s) => s,
                V::Term(t) => string_form(&t),
            };
            let b = match b {
                V::Str(s) => s,
                V::Term(t) => string_form(&t),
            };
            match filter.op {
                PlanOp::Eq => a == b,
                PlanOp::Ne => a != b,
                PlanOp::Lt => a < b,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use owlbase_rdf::term::Literal;
    use owlbase_rdf::Iri;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn var(v: &str) -> PlanTerm {
        PlanTerm::Var(v.to_owned())
    }

    fn c(s: &str) -> PlanTerm {
        PlanTerm::Const(Term::Iri(iri(s)))
    }

    #[test]
    fn render_is_deterministic_and_structured() {
        let plan = QueryPlan {
            patterns: vec![PlanPattern {
                subject: var("s"),
                predicate: c("http://e/p"),
                object: var("o"),
            }],
            negations: vec![vec![PlanPattern {
                subject: var("s"),
                predicate: c("http://e/label"),
                object: var("l"),
            }]],
            filters: vec![PlanFilter {
                lhs: PlanOperand::Str("s".to_owned()),
                op: PlanOp::Lt,
                rhs: PlanOperand::Const(Term::Literal(Literal::string("m"))),
            }],
            bindings_in: Some(SeedBindings {
                variable: "s".to_owned(),
                terms: vec![Term::Iri(iri("http://e/a"))],
            }),
            projection: vec!["s".to_owned(), "o".to_owned()],
            distinct: true,
            limit: Some(7),
        };
        let rendered = render_sparql(&plan);
        assert_eq!(
            rendered,
            "SELECT DISTINCT ?s ?o WHERE { \
             VALUES ?s { <http://e/a> } \
             ?s <http://e/p> ?o . \
             FILTER NOT EXISTS { ?s <http://e/label> ?l . } \
             FILTER(STR(?s) < \"m\") } LIMIT 7"
        );
        assert_eq!(rendered, render_sparql(&plan));
    }

    #[test]
    fn well_formedness_requires_projected_vars_to_occur() {
        let plan = QueryPlan {
            patterns: vec![],
            negations: vec![],
            filters: vec![],
            bindings_in: None,
            projection: vec!["ghost".to_owned()],
            distinct: false,
            limit: None,
        };
        assert!(!plan.is_well_formed());
    }

    #[test]
    fn interpret_joins_and_negates() {
        let triples = vec![
            Triple::new(iri("http://e/a"), iri("http://e/p"), Term::Iri(iri("http://e/x"))),
            Triple::new(iri("http://e/b"), iri("http://e/p"), Term::Iri(iri("http://e/x"))),
            Triple::new(
                iri("http://e/a"),
                iri("http://e/label"),
                Term::Literal(Literal::string("A")),
            ),
        ];
        let plan = QueryPlan {
            patterns: vec![PlanPattern {
                subject: var("s"),
                predicate: c("http://e/p"),
                object: var("o"),
            }],
            negations: vec![vec![PlanPattern {
                subject: var("s"),
                predicate: c("http://e/label"),
                object: var("l"),
            }]],
            filters: vec![],
            bindings_in: None,
            projection: vec!["s".to_owned()],
            distinct: false,
            limit: None,
        };
        let rows = interpret(&plan, &triples);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0]["s"], Term::Iri(iri("http://e/b")));
    }

    #[test]
    fn seed_bindings_restrict_solutions() {
        let triples = vec![
            Triple::new(iri("http://e/a"), iri("http://e/p"), Term::Iri(iri("http://e/x"))),
            Triple::new(iri("http://e/b"), iri("http://e/p"), Term::Iri(iri("http://e/x"))),
        ];
        let plan = QueryPlan {
            patterns: vec![PlanPattern {
                subject: var("s"),
                predicate: c("http://e/p"),
                object: var("o"),
            }],
            negations: vec![],
            filters: vec![],
            bindings_in: Some(SeedBindings {
                variable: "s".to_owned(),
                terms: vec![Term::Iri(iri("http://e/b")), Term::Iri(iri("http://e/nowhere"))],
            }),
            projection: vec!["s".to_owned()],
            distinct: false,
            limit: None,
        };
        let rows = interpret(&plan, &triples);
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0]["s"], Term::Iri(iri("http://e/b")));
    }
}
