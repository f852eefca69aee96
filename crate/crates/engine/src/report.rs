//! Run reports: what was created, reused, failed, and found by QA.

use std::collections::BTreeMap;

use owlbase_model::EntityId;
use owlbase_qa::QualityFinding;
use serde::{Deserialize, Serialize};

/// How resolve_or_create satisfied one draft.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Disposition {
    Created,
    CacheHit,
    ExternalIdHit,
}

/// An entity that could not be created after retries were exhausted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailedEntity {
    pub iri: String,
    pub error: String,
}

/// A claim left out because its target entity failed or its source
/// could not take an amendment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DroppedClaim {
    pub source: String,
    pub property: String,
    pub target: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchReport {
    pub batch_index: usize,
    pub entity_ids: Vec<EntityId>,
    pub qa_findings: Vec<QualityFinding>,
}

/// Outcome of the resume lag barrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagBarrierOutcome {
    pub polls: usize,
    /// False when the poll budget ran out before the view settled.
    pub settled: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestionReport {
    pub created: usize,
    pub reused_cache: usize,
    pub reused_external_id: usize,
    pub failed: Vec<FailedEntity>,
    /// Amendment failures in the claims pass; the entity itself exists.
    pub claim_errors: Vec<FailedEntity>,
    pub dropped_claims: Vec<DroppedClaim>,
    /// IRIs whose external id lookup matched more than one entity.
    pub multiple_matches: Vec<String>,
    /// Non-fatal notices, e.g. lenient-mode extraction skips.
    pub warnings: Vec<String>,
    pub batches: Vec<BatchReport>,
    /// Findings from the final whole-graph QA stage.
    pub findings: Vec<QualityFinding>,
    /// Stage name to elapsed milliseconds.
    pub stage_durations: BTreeMap<String, u64>,
    pub lag_barrier: Option<LagBarrierOutcome>,
}

impl IngestionReport {
    /// Every attempted entity lands in exactly one bucket.
    pub fn attempted(&self) -> usize {
        self.created + self.reused_cache + self.reused_external_id + self.failed.len()
    }

    pub fn record(&mut self, disposition: Disposition) {
        match disposition {
            Disposition::Created => self.created += 1,
            Disposition::CacheHit => self.reused_cache += 1,
            Disposition::ExternalIdHit => self.reused_external_id += 1,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
