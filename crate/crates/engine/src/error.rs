use owlbase_client::WbError;
use owlbase_rdf::RdfError;

/// Failures that stop an ingestion run.
#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    /// Strict mode found ontology predicates the dictionary does not map.
    #[error("strict mode: {0} unmapped ontology properties (first: {1})")]
    Unmapped(usize, String),

    #[error("extraction failed: {0}")]
    Rdf(#[from] RdfError),

    /// A permanent client error aborted the run. The checkpoint in the
    /// cache file records where.
    #[error("aborted at stage {stage} cursor {cursor}: {source}")]
    Aborted {
        stage: &'static str,
        cursor: usize,
        #[source]
        source: WbError,
    },

    /// A client failure outside the per-entity retry envelope, e.g.
    /// during endpoint preparation or a standalone resolve.
    #[error("client error: {0}")]
    Client(#[from] WbError),

    #[error("cache failure: {0}")]
    Cache(String),

    #[error("quality check execution failed: {0}")]
    Qa(String),

    /// Raised by the `interrupt_after_writes` hook; simulates a crash
    /// between two writes in tests.
    #[error("interrupted after {writes} writes")]
    Interrupted { writes: usize },
}
