//! Direct evaluation of parsed queries against an in-memory triple set,
//! under SPARQL bag semantics for the supported subset.

use std::collections::BTreeMap;

use owlbase_rdf::term::{Term, Triple};

use crate::ast::{CompareOp, Comparison, Group, Operand, Query, TermPattern, TriplePattern};

/// One solution row: variable name to bound term.
pub type Binding = BTreeMap<String, Term>;

/// Evaluate a query over the triples, returning projected rows in
/// deterministic order. Rows form a bag; DISTINCT and LIMIT have been
/// applied.
pub fn evaluate(query: &Query, triples: &[Triple]) -> Vec<Binding> {
    let solutions = eval_group(&query.body, Binding::new(), triples);
    let vars = query.output_variables();
    let mut rows: Vec<Binding> = solutions
        .into_iter()
        .map(|solution| {
            vars.iter()
                .filter_map(|v| solution.get(v).map(|t| (v.clone(), t.clone())))
                .collect()
        })
        .collect();
    if query.distinct {
        let mut seen = std::collections::BTreeSet::new();
        rows.retain(|row| seen.insert(row.clone()));
    }
    if let Some(limit) = query.limit {
        rows.truncate(limit);
    }
    rows
}

/// All solutions of a group, starting from one seed binding.
fn eval_group(group: &Group, seed: Binding, triples: &[Triple]) -> Vec<Binding> {
    let mut solutions = vec![seed];

    if let Some(values) = &group.values {
        let mut joined = Vec::new();
        for solution in &solutions {
            for row in &values.rows {
                let mut extended = solution.clone();
                let mut compatible = true;
                for (var, term) in values.variables.iter().zip(row) {
                    match extended.get(var) {
                        Some(existing) if existing != term => {
                            compatible = false;
                            break;
                        }
                        _ => {
                            extended.insert(var.clone(), term.clone());
                        }
                    }
                }
                if compatible {
                    joined.push(extended);
                }
            }
        }
        solutions = joined;
    }

    for pattern in &group.patterns {
        let mut extended = Vec::new();
        for solution in &solutions {
            for triple in triples {
                if let Some(next) = match_triple(pattern, triple, solution) {
                    extended.push(next);
                }
            }
        }
        solutions = extended;
    }

    solutions.retain(|solution| {
        group.filters.iter().all(|f| filter_passes(f, solution))
            && group
                .not_exists
                .iter()
                .all(|inner| eval_group(inner, solution.clone(), triples).is_empty())
    });
    solutions
}

fn match_triple(pattern: &TriplePattern, triple: &Triple, binding: &Binding) -> Option<Binding> {
    let mut next = binding.clone();
    unify(&pattern.subject, &Term::from(triple.subject.clone()), &mut next)?;
    unify(&pattern.predicate, &Term::Iri(triple.predicate.clone()), &mut next)?;
    unify(&pattern.object, &triple.object, &mut next)?;
    Some(next)
}

fn unify(pattern: &TermPattern, term: &Term, binding: &mut Binding) -> Option<()> {
    match pattern {
        TermPattern::Var(v) => match binding.get(v) {
            Some(bound) if bound == term => Some(()),
            Some(_) => None,
            None => {
                binding.insert(v.clone(), term.clone());
                Some(())
            }
        },
        TermPattern::Iri(iri) => (term == &Term::Iri(iri.clone())).then_some(()),
        TermPattern::Literal(lit) => (term == &Term::Literal(lit.clone())).then_some(()),
    }
}

/// The string form a term takes under STR(): the IRI text or the lexical
/// form of a literal. Blank nodes have no STR() in SPARQL; their label
/// stands in so comparisons stay total.
pub fn str_form(term: &Term) -> String {
    match term {
        Term::Iri(iri) => iri.as_str().to_owned(),
        Term::Blank(b) => b.clone(),
        Term::Literal(lit) => lit.lexical().to_owned(),
    }
}

enum Value {
    Term(Term),
    Str(String),
}

fn operand_value(operand: &Operand, binding: &Binding) -> Option<Value> {
    match operand {
        Operand::Var(v) => binding.get(v).cloned().map(Value::Term),
        Operand::Str(v) => binding.get(v).map(|t| Value::Str(str_form(t))),
        Operand::Constant(term) => Some(Value::Term(term.clone())),
    }
}

/// A comparison over an unbound variable evaluates to an error in SPARQL,
/// which a FILTER treats as false; the row is dropped.
fn filter_passes(comparison: &Comparison, binding: &Binding) -> bool {
    let Some(lhs) = operand_value(&comparison.lhs, binding) else {
        return false;
    };
    let Some(rhs) = operand_value(&comparison.rhs, binding) else {
        return false;
    };
    match (lhs, rhs) {
        (Value::Term(a), Value::Term(b)) => match comparison.op {
            CompareOp::Eq => a == b,
            CompareOp::Ne => a != b,
            CompareOp::Lt => str_form(&a) < str_form(&b),
        },
        (a, b) => {
            let a = match a {
                Value::Str(s) => s,
                Value::Term(t) => str_form(&t),
            };
            let b = match b {
                Value::Str(s) => s,
                Value::Term(t) => str_form(&t),
            };
            match comparison.op {
                CompareOp::Eq => a == b,
                CompareOp::Ne => a != b,
                CompareOp::Lt => a < b,
            }
        }
    }
}
