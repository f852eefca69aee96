//! Abstract syntax for the supported SPARQL subset.
//!
//! The subset is deliberately small: SELECT with a basic graph pattern,
//! conjunctive FILTER comparisons, FILTER NOT EXISTS groups, one VALUES
//! clause, DISTINCT, and LIMIT. Everything else is rejected by the parser
//! so that accidental reliance on unimplemented semantics cannot go
//! unnoticed.

use owlbase_rdf::term::{Literal, Term};
use owlbase_rdf::Iri;

/// One position of a triple pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermPattern {
    Var(String),
    Iri(Iri),
    Literal(Literal),
}

impl TermPattern {
    pub fn as_var(&self) -> Option<&str> {
        match self {
            TermPattern::Var(v) => Some(v),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriplePattern {
    pub subject: TermPattern,
    pub predicate: TermPattern,
    pub object: TermPattern,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareOp {
    Eq,
    Ne,
    Lt,
}

/// A filter operand: a variable, a STR(?v) coercion, or a constant term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operand {
    Var(String),
    Str(String),
    Constant(Term),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Comparison {
    pub lhs: Operand,
    pub op: CompareOp,
    pub rhs: Operand,
}

/// An inline data block: VALUES ?v { t1 t2 ... } or the multi-variable
/// form VALUES (?a ?b) { (t1 t2) ... }.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuesClause {
    pub variables: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

/// The body of a WHERE clause (or of a NOT EXISTS group).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Group {
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Comparison>,
    pub not_exists: Vec<Group>,
    pub values: Option<ValuesClause>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub distinct: bool,
    /// Projected variables, in SELECT order. Empty means `SELECT *`.
    pub projection: Vec<String>,
    pub body: Group,
    pub limit: Option<usize>,
}

impl Query {
    /// Variables the query will actually return: the projection, or all
    /// body variables in first-appearance order for `SELECT *`.
    pub fn output_variables(&self) -> Vec<String> {
        if !self.projection.is_empty() {
            return self.projection.clone();
        }
        let mut out = Vec::new();
        let mut push = |v: &str| {
            if !out.iter().any(|x| x == v) {
                out.push(v.to_owned());
            }
        };
        if let Some(values) = &self.body.values {
            for v in &values.variables {
                push(v);
            }
        }
        for p in &self.body.patterns {
            for tp in [&p.subject, &p.predicate, &p.object] {
                if let TermPattern::Var(v) = tp {
                    push(v);
                }
            }
        }
        out
    }
}
