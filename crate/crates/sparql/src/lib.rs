//! A small SPARQL engine covering exactly the query subset this toolkit
//! emits: SELECT with basic graph patterns, conjunctive =/!=/< filters
//! with STR(), FILTER NOT EXISTS, VALUES, DISTINCT, and LIMIT.
//!
//! The parser rejects everything else by name, so a query drifting
//! outside the subset fails in tests rather than silently changing
//! meaning between the embedded endpoint and a real one.

pub mod ast;
pub mod error;
pub mod eval;
pub mod parse;
pub mod results;

pub use ast::{CompareOp, Comparison, Group, Operand, Query, TermPattern, TriplePattern, ValuesClause};
pub use error::SparqlError;
pub use eval::{evaluate, str_form, Binding};
pub use parse::parse_query;
