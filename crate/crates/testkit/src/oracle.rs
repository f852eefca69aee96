//! A brute-force reference evaluator for the SPARQL subset, plus seeded
//! generators for random stores and queries.
//!
//! The production engine evaluates by extending bindings pattern by
//! pattern. The oracle takes the opposite route: it enumerates every
//! candidate assignment of the query's variables over the store's terms
//! and counts how often each assignment is produced, which makes it a
//! useful disagreement detector precisely because it shares no evaluation
//! strategy with the engine. Both consume the same parsed query, so a
//! disagreement always points at evaluation, not at query reading.

use std::collections::{BTreeMap, BTreeSet};

use owlbase_rdf::ntriples::term_text;
use owlbase_rdf::term::{Literal, Term, Triple};
use owlbase_rdf::Iri;
use owlbase_sparql::ast::{CompareOp, Comparison, Group, Operand, Query, TermPattern};
use owlbase_sparql::Binding;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Evaluate under bag semantics by candidate enumeration. Refuses LIMIT,
/// whose truncation depends on row order the oracle does not model.
pub fn oracle_evaluate(query: &Query, triples: &[Triple]) -> Vec<Binding> {
    assert!(
        query.limit.is_none(),
        "LIMIT picks rows by evaluation order; compare it some other way"
    );
    let counts = triple_counts(triples);
    let solutions = group_solutions(&query.body, &Binding::new(), triples, &counts);
    let vars = query.output_variables();
    let mut rows = Vec::new();
    for (binding, multiplicity) in solutions {
        let row: Binding = vars
            .iter()
            .filter_map(|v| binding.get(v).map(|t| (v.clone(), t.clone())))
            .collect();
        for _ in 0..multiplicity {
            rows.push(row.clone());
        }
    }
    if query.distinct {
        let mut seen = BTreeSet::new();
        rows.retain(|row| seen.insert(row.clone()));
    }
    rows
}

/// Sort rows so two result bags can be compared as multisets.
pub fn sorted_rows(mut rows: Vec<Binding>) -> Vec<Binding> {
    rows.sort();
    rows
}

type TripleKey = (Term, Term, Term);

fn triple_counts(triples: &[Triple]) -> BTreeMap<TripleKey, u64> {
    let mut counts = BTreeMap::new();
    for t in triples {
        let key = (
            Term::from(t.subject.clone()),
            Term::Iri(t.predicate.clone()),
            t.object.clone(),
        );
        *counts.entry(key).or_insert(0) += 1;
    }
    counts
}

/// All solutions of a group given an outer binding, each with the number
/// of times the engine's join semantics would produce it.
fn group_solutions(
    group: &Group,
    seed: &Binding,
    triples: &[Triple],
    counts: &BTreeMap<TripleKey, u64>,
) -> Vec<(Binding, u64)> {
    let vars = fresh_variables(group, seed);
    let candidates: Vec<Vec<Term>> = vars
        .iter()
        .map(|v| candidate_terms(v, group, triples))
        .collect();

    let mut out = Vec::new();
    let mut assignment = seed.clone();
    enumerate(&vars, &candidates, 0, &mut assignment, &mut |binding| {
        let multiplicity = assignment_multiplicity(group, binding, counts);
        if multiplicity == 0 {
            return;
        }
        if !group.filters.iter().all(|f| filter_holds(f, binding)) {
            return;
        }
        let blocked = group
            .not_exists
            .iter()
            .any(|inner| !group_solutions(inner, binding, triples, counts).is_empty());
        if blocked {
            return;
        }
        out.push((binding.clone(), multiplicity));
    });
    out
}

/// Variables this group introduces on top of the outer binding, in first
/// appearance order: VALUES variables, then pattern variables.
fn fresh_variables(group: &Group, seed: &Binding) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    let mut add = |v: &str, vars: &mut Vec<String>| {
        if !seed.contains_key(v) && !vars.iter().any(|x| x == v) {
            vars.push(v.to_owned());
        }
    };
    if let Some(values) = &group.values {
        for v in &values.variables {
            add(v, &mut vars);
        }
    }
    for pattern in &group.patterns {
        for tp in [&pattern.subject, &pattern.predicate, &pattern.object] {
            if let TermPattern::Var(v) = tp {
                add(v, &mut vars);
            }
        }
    }
    vars
}

/// Terms a variable could possibly be bound to: the store's terms in the
/// positions the variable occupies, plus its VALUES terms. A superset is
/// fine; impossible assignments drop out with multiplicity zero.
fn candidate_terms(var: &str, group: &Group, triples: &[Triple]) -> Vec<Term> {
    let mut set: BTreeSet<Term> = BTreeSet::new();
    for pattern in &group.patterns {
        if pattern.subject.as_var() == Some(var) {
            set.extend(triples.iter().map(|t| Term::from(t.subject.clone())));
        }
        if pattern.predicate.as_var() == Some(var) {
            set.extend(triples.iter().map(|t| Term::Iri(t.predicate.clone())));
        }
        if pattern.object.as_var() == Some(var) {
            set.extend(triples.iter().map(|t| t.object.clone()));
        }
    }
    if let Some(values) = &group.values {
        for (i, v) in values.variables.iter().enumerate() {
            if v == var {
                set.extend(values.rows.iter().map(|row| row[i].clone()));
            }
        }
    }
    set.into_iter().collect()
}

fn enumerate(
    vars: &[String],
    candidates: &[Vec<Term>],
    depth: usize,
    assignment: &mut Binding,
    visit: &mut dyn FnMut(&Binding),
) {
    if depth == vars.len() {
        visit(assignment);
        return;
    }
    for term in &candidates[depth] {
        assignment.insert(vars[depth].clone(), term.clone());
        enumerate(vars, candidates, depth + 1, assignment, visit);
    }
    assignment.remove(&vars[depth]);
}

/// How many times the join would emit this fully ground assignment: the
/// number of compatible VALUES rows times, per pattern, the number of
/// store triples the instantiated pattern matches.
fn assignment_multiplicity(
    group: &Group,
    binding: &Binding,
    counts: &BTreeMap<TripleKey, u64>,
) -> u64 {
    let mut multiplicity: u64 = match &group.values {
        None => 1,
        Some(values) => values
            .rows
            .iter()
            .filter(|row| {
                values
                    .variables
                    .iter()
                    .zip(row.iter())
                    .all(|(v, t)| binding.get(v) == Some(t))
            })
            .count() as u64,
    };
    for pattern in &group.patterns {
        if multiplicity == 0 {
            return 0;
        }
        let key = (
            ground(&pattern.subject, binding),
            ground(&pattern.predicate, binding),
            ground(&pattern.object, binding),
        );
        multiplicity *= counts.get(&key).copied().unwrap_or(0);
    }
    multiplicity
}

fn ground(pattern: &TermPattern, binding: &Binding) -> Term {
    match pattern {
        TermPattern::Var(v) => binding
            .get(v)
            .cloned()
            .expect("every group variable is assigned before grounding"),
        TermPattern::Iri(iri) => Term::Iri(iri.clone()),
        TermPattern::Literal(lit) => Term::Literal(lit.clone()),
    }
}

fn text_form(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri.as_str().to_owned(),
        Term::Blank(b) => b.clone(),
        Term::Literal(lit) => lit.lexical().to_owned(),
    }
}

/// FILTER semantics: a comparison touching an unbound variable is false,
/// term comparisons for =/!= are exact, < and any STR() coercion compare
/// the plain text forms.
fn filter_holds(comparison: &Comparison, binding: &Binding) -> bool {
    enum Side {
        Term(Term),
        Text(String),
    }
    let side = |operand: &Operand| -> Option<Side> {
        match operand {
            Operand::Var(v) => binding.get(v).cloned().map(Side::Term),
            Operand::Str(v) => binding.get(v).map(|t| Side::Text(text_form(t))),
            Operand::Constant(term) => Some(Side::Term(term.clone())),
        }
    };
    let (Some(lhs), Some(rhs)) = (side(&comparison.lhs), side(&comparison.rhs)) else {
        return false;
    };
    match (lhs, rhs) {
        (Side::Term(a), Side::Term(b)) => match comparison.op {
            CompareOp::Eq => a == b,
            CompareOp::Ne => a != b,
            CompareOp::Lt => text_form(&a) < text_form(&b),
        },
        (a, b) => {
            let a = match a {
                Side::Text(s) => s,
                Side::Term(t) => text_form(&t),
            };
            let b = match b {
                Side::Text(s) => s,
                Side::Term(t) => text_form(&t),
            };
            match comparison.op {
                CompareOp::Eq => a == b,
                CompareOp::Ne => a != b,
                CompareOp::Lt => a < b,
            }
        }
    }
}

/// One random store and query pair in the supported subset.
#[derive(Debug, Clone)]
pub struct OracleCase {
    pub store: Vec<Triple>,
    pub query: String,
}

fn pool_iri(prefix: &str, n: usize) -> Vec<Term> {
    (0..n)
        .map(|i| Term::Iri(Iri::new(format!("http://t/{prefix}{i}")).unwrap()))
        .collect()
}

struct Pools {
    subjects: Vec<Term>,
    predicates: Vec<Term>,
    objects: Vec<Term>,
}

fn pools() -> Pools {
    let subjects = pool_iri("s", 8);
    let predicates = pool_iri("p", 4);
    let mut objects = subjects.clone();
    objects.extend(pool_iri("o", 2));
    for i in 0..5 {
        objects.push(Term::Literal(Literal::string(format!("v{i}"))));
    }
    objects.push(Term::Literal(Literal::lang("w0", "en")));
    objects.push(Term::Literal(Literal::lang("w1", "en")));
    objects.push(Term::Literal(Literal::lang("w2", "de")));
    Pools { subjects, predicates, objects }
}

/// A store of 1 to 200 triples over deliberately small term pools, so
/// random queries actually join.
pub fn random_store(rng: &mut ChaCha8Rng) -> Vec<Triple> {
    let pools = pools();
    let n = rng.random_range(1..=200);
    (0..n)
        .map(|_| {
            let Term::Iri(s) = pools.subjects.choose(rng).unwrap().clone() else {
                unreachable!("subject pool holds IRIs only")
            };
            let Term::Iri(p) = pools.predicates.choose(rng).unwrap().clone() else {
                unreachable!("predicate pool holds IRIs only")
            };
            Triple::new(s, p, pools.objects.choose(rng).unwrap().clone())
        })
        .collect()
}

#[derive(Clone)]
enum Slot {
    Var(String),
    Const(Term),
}

fn render_slot(slot: &Slot) -> String {
    match slot {
        Slot::Var(v) => format!("?{v}"),
        Slot::Const(term) => term_text(term),
    }
}

/// A random query over the pool vocabulary: one to three triple patterns
/// with shared variables, sometimes VALUES, filters, FILTER NOT EXISTS,
/// and DISTINCT. Never LIMIT, which the oracle cannot check exactly.
pub fn random_query(rng: &mut ChaCha8Rng) -> String {
    let pools = pools();
    let names = ["a", "b", "c", "d"];
    let mut occurring: Vec<String> = Vec::new();

    let mut pick_var = |rng: &mut ChaCha8Rng, occurring: &mut Vec<String>| -> String {
        let reuse = !occurring.is_empty() && rng.random_bool(0.6);
        let name = if reuse {
            occurring.choose(rng).unwrap().clone()
        } else {
            names.choose(rng).unwrap().to_string()
        };
        if !occurring.contains(&name) {
            occurring.push(name.clone());
        }
        name
    };

    let pattern_count = *[1, 1, 2, 2, 3].choose(rng).unwrap();
    let mut patterns: Vec<[Slot; 3]> = Vec::new();
    for _ in 0..pattern_count {
        let subject = if rng.random_bool(0.55) {
            Slot::Var(pick_var(rng, &mut occurring))
        } else {
            Slot::Const(pools.subjects.choose(rng).unwrap().clone())
        };
        let predicate = if rng.random_bool(0.4) {
            Slot::Var(pick_var(rng, &mut occurring))
        } else {
            Slot::Const(pools.predicates.choose(rng).unwrap().clone())
        };
        let object = if rng.random_bool(0.55) {
            Slot::Var(pick_var(rng, &mut occurring))
        } else {
            Slot::Const(pools.objects.choose(rng).unwrap().clone())
        };
        patterns.push([subject, predicate, object]);
    }
    if occurring.is_empty() {
        patterns[0][0] = Slot::Var("a".to_owned());
        occurring.push("a".to_owned());
    }

    let values = if rng.random_bool(0.25) {
        let var = occurring.choose(rng).unwrap().clone();
        let mut terms: Vec<Term> = Vec::new();
        for _ in 0..rng.random_range(1..=3) {
            let term = if rng.random_bool(0.2) {
                Term::Iri(Iri::new("http://t/nowhere").unwrap())
            } else {
                [&pools.subjects, &pools.objects]
                    .choose(rng)
                    .unwrap()
                    .choose(rng)
                    .unwrap()
                    .clone()
            };
            terms.push(term);
        }
        Some((var, terms))
    } else {
        None
    };

    let mut operand = |rng: &mut ChaCha8Rng| -> String {
        if rng.random_bool(0.7) {
            let var = occurring.choose(rng).unwrap();
            if rng.random_bool(0.5) {
                format!("STR(?{var})")
            } else {
                format!("?{var}")
            }
        } else {
            term_text(pools.objects.choose(rng).unwrap())
        }
    };
    let filter_count = *[0, 0, 0, 0, 0, 1, 1, 1, 2, 2].choose(rng).unwrap();
    let mut filters: Vec<String> = Vec::new();
    for _ in 0..filter_count {
        let lhs = operand(rng);
        let rhs = operand(rng);
        let op = *["=", "=", "!=", "!=", "<"].choose(rng).unwrap();
        filters.push(format!("FILTER({lhs} {op} {rhs})"));
    }

    let not_exists = if rng.random_bool(0.2) {
        let mut inner_slot = |rng: &mut ChaCha8Rng, consts: &[Term], var_p: f64| -> Slot {
            if rng.random_bool(var_p) {
                if rng.random_bool(0.75) {
                    Slot::Var(occurring.choose(rng).unwrap().clone())
                } else {
                    Slot::Var("n".to_owned())
                }
            } else {
                Slot::Const(consts.choose(rng).unwrap().clone())
            }
        };
        let subject = inner_slot(rng, &pools.subjects, 0.6);
        let predicate = inner_slot(rng, &pools.predicates, 0.3);
        let object = inner_slot(rng, &pools.objects, 0.5);
        Some([subject, predicate, object])
    } else {
        None
    };

    let mut projection: Vec<&String> = occurring
        .iter()
        .filter(|_| rng.random_bool(0.7))
        .collect();
    if projection.is_empty() {
        projection.push(occurring.choose(rng).unwrap());
    }

    let mut text = String::from("SELECT ");
    if rng.random_bool(0.3) {
        text.push_str("DISTINCT ");
    }
    for var in &projection {
        text.push_str(&format!("?{var} "));
    }
    text.push_str("WHERE { ");
    if let Some((var, terms)) = &values {
        text.push_str(&format!("VALUES ?{var} {{ "));
        for term in terms {
            text.push_str(&term_text(term));
            text.push(' ');
        }
        text.push_str("} ");
    }
    for [s, p, o] in &patterns {
        text.push_str(&format!(
            "{} {} {} . ",
            render_slot(s),
            render_slot(p),
            render_slot(o)
        ));
    }
    for filter in &filters {
        text.push_str(filter);
        text.push(' ');
    }
    if let Some([s, p, o]) = &not_exists {
        text.push_str(&format!(
            "FILTER NOT EXISTS {{ {} {} {} . }} ",
            render_slot(s),
            render_slot(p),
            render_slot(o)
        ));
    }
    text.push('}');
    text
}

/// A full random comparison case.
pub fn random_case(rng: &mut ChaCha8Rng) -> OracleCase {
    OracleCase {
        store: random_store(rng),
        query: random_query(rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use owlbase_sparql::{evaluate, parse_query};
    use rand_chacha::rand_core::SeedableRng;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    fn store() -> Vec<Triple> {
        let t = |s: &str, p: &str, o: Term| Triple::new(iri(s), iri(p), o);
        vec![
            t("http://t/s0", "http://t/p0", Term::Iri(iri("http://t/s1"))),
            t("http://t/s1", "http://t/p0", Term::Iri(iri("http://t/s2"))),
            t("http://t/s0", "http://t/p1", Term::Literal(Literal::string("v0"))),
            t("http://t/s1", "http://t/p1", Term::Literal(Literal::string("v0"))),
            // a deliberate duplicate, to exercise bag multiplicities
            t("http://t/s0", "http://t/p0", Term::Iri(iri("http://t/s1"))),
        ]
    }

    fn both(query: &str) -> (Vec<Binding>, Vec<Binding>) {
        let parsed = parse_query(query).unwrap();
        let store = store();
        (
            sorted_rows(evaluate(&parsed, &store)),
            sorted_rows(oracle_evaluate(&parsed, &store)),
        )
    }

    #[test]
    fn duplicate_triples_duplicate_rows_in_both_routes() {
        let (engine, oracle) = both("SELECT ?s WHERE { ?s <http://t/p0> <http://t/s1> . }");
        assert_eq!(engine.len(), 2);
        assert_eq!(engine, oracle);
    }

    #[test]
    fn joins_filters_and_negation_agree() {
        let (engine, oracle) = both(
            r#"SELECT ?a ?b WHERE { ?a <http://t/p1> ?v . ?b <http://t/p1> ?v .
               FILTER(STR(?a) < STR(?b)) }"#,
        );
        assert_eq!(engine.len(), 1);
        assert_eq!(engine, oracle);

        let (engine, oracle) = both(
            r#"SELECT ?s WHERE { ?s <http://t/p0> ?o .
               FILTER NOT EXISTS { ?o <http://t/p0> ?n . } }"#,
        );
        assert_eq!(engine, oracle);
    }

    #[test]
    fn values_and_distinct_agree() {
        let (engine, oracle) = both(
            r#"SELECT ?c WHERE { VALUES ?c { <http://t/s0> <http://t/nowhere> }
               ?c <http://t/p0> ?o . }"#,
        );
        assert_eq!(engine.len(), 2, "the duplicated triple matches twice");
        assert_eq!(engine, oracle);

        let (engine, oracle) =
            both("SELECT DISTINCT ?v WHERE { ?s <http://t/p1> ?v . }");
        assert_eq!(engine.len(), 1);
        assert_eq!(engine, oracle);
    }

    #[test]
    fn random_cases_agree_on_a_quick_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for round in 0..25 {
            let case = random_case(&mut rng);
            let parsed = parse_query(&case.query)
                .unwrap_or_else(|e| panic!("round {round}: {e} in {}", case.query));
            let engine = sorted_rows(evaluate(&parsed, &case.store));
            let oracle = sorted_rows(oracle_evaluate(&parsed, &case.store));
            assert_eq!(engine, oracle, "round {round} query {}", case.query);
        }
    }

    #[test]
    fn generated_queries_stay_inside_the_subset() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let query = random_query(&mut rng);
            parse_query(&query).unwrap_or_else(|e| panic!("{e} in {query}"));
        }
    }
}
