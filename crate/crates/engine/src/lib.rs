//! Idempotent three-stage ingestion of extracted ontology entities into
//! a Wikibase instance, with a persistent cache for checkpoint/resume.

pub mod cache;
pub mod engine;
pub mod error;
pub mod report;

pub use cache::{CacheEntry, Checkpoint, LocalCache, Stage};
pub use engine::{
    resolve_or_create, resume, run_ingestion, verify_cache, ClientEndpoint, IngestConfig,
};
pub use error::EngineError;
pub use report::{
    BatchReport, Disposition, DroppedClaim, FailedEntity, IngestionReport, LagBarrierOutcome,
};
