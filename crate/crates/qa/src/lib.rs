//! Quality assurance over an ingested Wikibase: a small query-plan IR,
//! a deterministic SPARQL renderer, an in-memory interpreter for the
//! same plans, the five standard checks, and finding reports.

pub mod checks;
pub mod error;
pub mod plan;
pub mod report;

pub use checks::{
    build_standard_checks, finding_from_row, run_checks, CheckName, QualityCheck, QualityFinding,
    QueryEndpoint, Severity,
};
pub use error::QaError;
pub use plan::{
    interpret, render_sparql, PlanFilter, PlanOp, PlanOperand, PlanPattern, PlanTerm, QueryPlan,
    Row, SeedBindings,
};
pub use report::{findings_from_jsonl, findings_table, findings_to_jsonl};
