//! Three-stage ingestion: classes, individuals (shells then claims),
//! then a whole-graph QA pass. Every write goes through the cache so an
//! interrupted run can resume without duplicating entities.

use std::collections::BTreeSet;
use std::time::Instant;

use owlbase_client::{WbClient, WbError};
use owlbase_model::wbns;
use owlbase_model::{
    map_class, map_individual, validate_extensibility, Claim, ClaimValue, EntityDraft, EntityId,
    EntityRef, MappingDictionary,
};
use owlbase_qa::{build_standard_checks, run_checks, QueryEndpoint, Row};
use owlbase_rdf::ntriples;
use owlbase_rdf::{class_import_order, extract_individuals, extract_schema, Iri, OntologyDocument};
use owlbase_rdf::Term;

use crate::cache::{LocalCache, Stage};
use crate::error::EngineError;
use crate::report::{
    BatchReport, Disposition, DroppedClaim, FailedEntity, IngestionReport, LagBarrierOutcome,
};

#[derive(Debug, Clone)]
pub struct IngestConfig {
    /// Entities per batch; a QA pass runs after each full batch when
    /// `qa_after_batch` is set.
    pub batch_size: usize,
    pub qa_after_batch: bool,
    /// On resume, poll the query service until the cached entities are
    /// visible before trusting external id lookups.
    pub lag_barrier: bool,
    pub lag_barrier_max_polls: usize,
    /// Consecutive unchanged polls required before the view counts as
    /// settled. Each poll advances a request-lagged replica by one
    /// request, so any lag at most this deep is fully drained.
    pub lag_barrier_settle_polls: usize,
    /// Pause between barrier polls. Zero is fine against the embedded
    /// test server, where each poll itself advances simulated time.
    pub lag_barrier_poll_ms: u64,
    /// Test hook: abort with `EngineError::Interrupted` after this many
    /// successful entity writes, simulating a crash mid-run.
    pub interrupt_after_writes: Option<usize>,
}

impl Default for IngestConfig {
    fn default() -> IngestConfig {
        IngestConfig {
            batch_size: 50,
            qa_after_batch: true,
            lag_barrier: false,
            lag_barrier_max_polls: 100,
            lag_barrier_settle_polls: 30,
            lag_barrier_poll_ms: 0,
            interrupt_after_writes: None,
        }
    }
}

/// Adapter letting the QA suite query through the API client.
pub struct ClientEndpoint<'a> {
    pub client: &'a WbClient,
}

impl QueryEndpoint for ClientEndpoint<'_> {
    fn select(&self, query: &str) -> Result<Vec<Row>, String> {
        self.client
            .sparql_query(query)
            .map(|results| results.rows)
            .map_err(|e| e.to_string())
    }
}

/// Look up a draft's entity, creating it only when neither the cache nor
/// an external id search finds it. On creation the cache is persisted
/// before this returns, so a crash cannot orphan the new entity.
pub fn resolve_or_create(
    draft: &EntityDraft,
    cache: &mut LocalCache,
    client: &WbClient,
    dict: &MappingDictionary,
) -> Result<(EntityId, Disposition), EngineError> {
    match resolve_step(draft, cache, client, dict) {
        Ok((id, disposition, _multiple)) => Ok((id, disposition)),
        Err(StepError::Client(e)) => Err(EngineError::Client(e)),
        Err(StepError::Fatal(e)) => Err(e),
    }
}

/// Client errors stay recoverable (the caller decides whether to abort);
/// cache failures are always fatal.
enum StepError {
    Client(WbError),
    Fatal(EngineError),
}

fn resolve_step(
    draft: &EntityDraft,
    cache: &mut LocalCache,
    client: &WbClient,
    dict: &MappingDictionary,
) -> Result<(EntityId, Disposition, bool), StepError> {
    if let Some(id) = cache.get(&draft.source_iri) {
        return Ok((id, Disposition::CacheHit, false));
    }
    let exid_property = dict.ontology_iri().property;
    let found = client
        .find_by_external_id(exid_property, draft.source_iri.as_str())
        .map_err(StepError::Client)?;
    if let Some(found) = found {
        cache
            .insert(draft.source_iri.clone(), found.id)
            .map_err(StepError::Fatal)?;
        cache.save().map_err(StepError::Fatal)?;
        return Ok((found.id, Disposition::ExternalIdHit, found.multiple));
    }
    let id = client.create_entity(draft).map_err(StepError::Client)?;
    cache.insert(draft.source_iri.clone(), id).map_err(StepError::Fatal)?;
    cache.save().map_err(StepError::Fatal)?;
    Ok((id, Disposition::Created, false))
}

pub fn run_ingestion(
    doc: &OntologyDocument,
    dict: &MappingDictionary,
    client: &WbClient,
    cache: &mut LocalCache,
    config: &IngestConfig,
) -> Result<IngestionReport, EngineError> {
    ingest(doc, dict, client, cache, config, false)
}

/// Continue a run whose cache (possibly partial) survives. Equivalent to
/// `run_ingestion`: the whole deterministic order is walked again and
/// already-ingested entities fall out as cache hits, which also retries
/// entities that failed last time.
pub fn resume(
    doc: &OntologyDocument,
    dict: &MappingDictionary,
    client: &WbClient,
    cache: &mut LocalCache,
    config: &IngestConfig,
) -> Result<IngestionReport, EngineError> {
    ingest(doc, dict, client, cache, config, true)
}

/// Cross-check every cache entry against the live store.
pub fn verify_cache(
    cache: &LocalCache,
    client: &WbClient,
    dict: &MappingDictionary,
) -> Result<Vec<String>, EngineError> {
    let exid_property = dict.ontology_iri().property;
    let mut problems = Vec::new();
    for (iri, entry) in cache.entries() {
        let entity = match client.get_entity(entry.id) {
            Ok(entity) => entity,
            Err(WbError::NotFound { .. }) => {
                problems.push(format!("{} maps to missing entity {}", iri.as_str(), entry.id));
                continue;
            }
            Err(e) => return Err(EngineError::Client(e)),
        };
        let stored_iri = entity
            .claims
            .get(&exid_property)
            .and_then(|statements| statements.first())
            .and_then(|statement| statement.mainsnak.datavalue.value.as_str())
            .map(str::to_owned);
        if stored_iri.as_deref() != Some(iri.as_str()) {
            problems.push(format!(
                "{} maps to {} whose recorded source is {}",
                iri.as_str(),
                entry.id,
                stored_iri.as_deref().unwrap_or("absent")
            ));
        }
    }
    Ok(problems)
}

struct RunState<'a> {
    dict: &'a MappingDictionary,
    client: &'a WbClient,
    config: &'a IngestConfig,
    report: IngestionReport,
    /// Source IRIs whose creation failed this run.
    failed_iris: BTreeSet<Iri>,
    class_ids: BTreeSet<EntityId>,
    writes_done: usize,
    batch_ids: Vec<EntityId>,
    next_batch_index: usize,
}

fn ingest(
    doc: &OntologyDocument,
    dict: &MappingDictionary,
    client: &WbClient,
    cache: &mut LocalCache,
    config: &IngestConfig,
    resuming: bool,
) -> Result<IngestionReport, EngineError> {
    if dict.strict {
        let unmapped = validate_extensibility(doc, dict);
        if let Some(first) = unmapped.first() {
            return Err(EngineError::Unmapped(unmapped.len(), first.as_str().to_owned()));
        }
    }

    let mut dict_entries: Vec<_> = dict.entries().collect();
    dict_entries.sort_by_key(|entry| entry.property);
    for entry in dict_entries {
        client.ensure_property(&entry.name, entry.datatype, entry.property)?;
    }

    let (classes, _properties) = extract_schema(doc)?;
    let ordered_classes = class_import_order(&classes)?;
    let routing = dict.annotation_routing();
    let extraction = extract_individuals(doc, &classes, &routing)?;
    let mut individuals = extraction.individuals;
    individuals.sort_by(|a, b| a.iri.as_str().cmp(b.iri.as_str()));

    let mut state = RunState {
        dict,
        client,
        config,
        report: IngestionReport::default(),
        failed_iris: BTreeSet::new(),
        class_ids: BTreeSet::new(),
        writes_done: 0,
        batch_ids: Vec::new(),
        next_batch_index: 0,
    };
    state.report.warnings = extraction.warnings;

    if resuming && config.lag_barrier {
        state.report.lag_barrier = Some(lag_barrier(client, cache, dict, config)?);
    }

    // Stage 1: classes in dependency order, so every subclass-of target
    // already exists when its child is written.
    let stopwatch = Instant::now();
    let mut skipped_props: BTreeSet<Iri> = BTreeSet::new();
    for (cursor, class) in ordered_classes.iter().enumerate() {
        cache.set_checkpoint(Stage::Classes, cursor);
        let mapped =
            map_class(class, dict).map_err(|e| EngineError::Client(WbError::Draft(e)))?;
        skipped_props.extend(mapped.skipped);
        let mut draft = mapped.draft;
        prepare_refs(&mut draft, cache, &state.failed_iris, &mut state.report);
        let resolved = state.attempt(cache, Stage::Classes, cursor, &draft)?;
        state.interrupt_check()?;
        if let Some(id) = resolved {
            state.class_ids.insert(id);
            state.flush_full_batch(cache)?;
        }
    }
    state.flush_partial_batch(cache)?;
    record_duration(&mut state.report, "classes", stopwatch);

    // Stage 2, first pass: individual shells carrying everything except
    // claims that point at other individuals. Lexicographic IRI order
    // keeps id assignment reproducible.
    let stopwatch = Instant::now();
    let instance_property = dict.instance_of().property;
    let mut deferred: Vec<(Iri, Vec<Claim>)> = Vec::new();
    for (cursor, individual) in individuals.iter().enumerate() {
        cache.set_checkpoint(Stage::Shells, cursor);
        let mapped =
            map_individual(individual, dict).map_err(|e| EngineError::Client(WbError::Draft(e)))?;
        skipped_props.extend(mapped.skipped);
        let mut draft = mapped.draft;
        let (shell_claims, object_claims): (Vec<Claim>, Vec<Claim>) =
            draft.claims.into_iter().partition(|claim| {
                claim.property == instance_property
                    || !matches!(claim.value, ClaimValue::EntityRef(_))
            });
        draft.claims = shell_claims;
        deferred.push((draft.source_iri.clone(), object_claims));
        prepare_refs(&mut draft, cache, &state.failed_iris, &mut state.report);
        let resolved = state.attempt(cache, Stage::Shells, cursor, &draft)?;
        state.interrupt_check()?;
        if resolved.is_some() {
            state.flush_full_batch(cache)?;
        }
    }
    state.flush_partial_batch(cache)?;
    record_duration(&mut state.report, "shells", stopwatch);

    for prop in skipped_props {
        state
            .report
            .warnings
            .push(format!("unmapped property skipped: {}", prop.as_str()));
    }

    // Stage 2, second pass: object claims. Every target either exists by
    // now or failed, so forward and cyclic references are safe.
    let stopwatch = Instant::now();
    for (cursor, (iri, claims)) in deferred.into_iter().enumerate() {
        cache.set_checkpoint(Stage::Claims, cursor);
        if claims.is_empty() || state.failed_iris.contains(&iri) {
            continue;
        }
        let Some(id) = cache.get(&iri) else {
            continue;
        };
        let mut amendment = EntityDraft::new(iri.clone());
        amendment.claims = claims;
        prepare_refs(&mut amendment, cache, &state.failed_iris, &mut state.report);
        if amendment.claims.is_empty() {
            continue;
        }
        match state.client.amend_entity(id, &amendment) {
            Ok(()) => {
                state.writes_done += 1;
                state.interrupt_check()?;
            }
            Err(e) if is_permanent(&e) => {
                cache.save()?;
                return Err(EngineError::Aborted { stage: "claims", cursor, source: e });
            }
            Err(e) => {
                state
                    .report
                    .claim_errors
                    .push(FailedEntity { iri: iri.as_str().to_owned(), error: e.to_string() });
            }
        }
    }
    record_duration(&mut state.report, "claims", stopwatch);

    // Stage 3: QA over the whole graph.
    let stopwatch = Instant::now();
    cache.set_checkpoint(Stage::Qa, 0);
    let endpoint = ClientEndpoint { client: state.client };
    let checks = build_standard_checks(state.dict, &state.class_ids);
    state.report.findings =
        run_checks(&checks, &endpoint).map_err(|e| EngineError::Qa(e.to_string()))?;
    record_duration(&mut state.report, "qa", stopwatch);

    cache.set_checkpoint(Stage::Done, 0);
    cache.save()?;
    Ok(state.report)
}

impl RunState<'_> {
    /// Resolve or create one draft, sorting the outcome into the report
    /// buckets. Permanent errors abort after checkpointing; exhausted
    /// retries mark the entity failed and let the run continue.
    fn attempt(
        &mut self,
        cache: &mut LocalCache,
        stage: Stage,
        cursor: usize,
        draft: &EntityDraft,
    ) -> Result<Option<EntityId>, EngineError> {
        match resolve_step(draft, cache, self.client, self.dict) {
            Ok((id, disposition, multiple)) => {
                self.report.record(disposition);
                if multiple {
                    self.report.multiple_matches.push(draft.source_iri.as_str().to_owned());
                }
                if disposition == Disposition::Created {
                    self.writes_done += 1;
                }
                self.batch_ids.push(id);
                Ok(Some(id))
            }
            Err(StepError::Client(e)) if is_permanent(&e) => {
                cache.save()?;
                Err(EngineError::Aborted { stage: stage.name(), cursor, source: e })
            }
            Err(StepError::Client(e)) => {
                self.failed_iris.insert(draft.source_iri.clone());
                self.report.failed.push(FailedEntity {
                    iri: draft.source_iri.as_str().to_owned(),
                    error: e.to_string(),
                });
                Ok(None)
            }
            Err(StepError::Fatal(e)) => Err(e),
        }
    }

    fn interrupt_check(&self) -> Result<(), EngineError> {
        if let Some(limit) = self.config.interrupt_after_writes {
            if self.writes_done >= limit {
                return Err(EngineError::Interrupted { writes: self.writes_done });
            }
        }
        Ok(())
    }

    fn flush_full_batch(&mut self, cache: &mut LocalCache) -> Result<(), EngineError> {
        if self.batch_ids.len() >= self.config.batch_size {
            self.flush_partial_batch(cache)?;
        }
        Ok(())
    }

    fn flush_partial_batch(&mut self, cache: &mut LocalCache) -> Result<(), EngineError> {
        if self.batch_ids.is_empty() {
            return Ok(());
        }
        if cache.is_dirty() {
            cache.save()?;
        }
        let entity_ids = std::mem::take(&mut self.batch_ids);
        let qa_findings = if self.config.qa_after_batch {
            let endpoint = ClientEndpoint { client: self.client };
            let checks = build_standard_checks(self.dict, &self.class_ids);
            run_checks(&checks, &endpoint).map_err(|e| EngineError::Qa(e.to_string()))?
        } else {
            Vec::new()
        };
        self.report.batches.push(BatchReport {
            batch_index: self.next_batch_index,
            entity_ids,
            qa_findings,
        });
        self.next_batch_index += 1;
        Ok(())
    }
}

/// Resolve entity refs through the cache and drop the ones that cannot
/// resolve, recording each dropped claim.
fn prepare_refs(
    draft: &mut EntityDraft,
    cache: &LocalCache,
    failed_iris: &BTreeSet<Iri>,
    report: &mut IngestionReport,
) {
    draft.resolve_refs(|iri| cache.get(iri));
    if draft.unresolved_refs().is_empty() {
        return;
    }
    let source = draft.source_iri.as_str().to_owned();
    draft.claims.retain(|claim| {
        let ClaimValue::EntityRef(EntityRef::Unresolved(target)) = &claim.value else {
            return true;
        };
        let reason = if failed_iris.contains(target) {
            "target entity failed"
        } else {
            "target is not part of this ingestion"
        };
        report.dropped_claims.push(DroppedClaim {
            source: source.clone(),
            property: claim.property.to_string(),
            target: target.as_str().to_owned(),
            reason: reason.to_owned(),
        });
        false
    });
}

fn is_permanent(error: &WbError) -> bool {
    match error {
        WbError::Api(api) => !api.kind.retriable(),
        _ => true,
    }
}

fn record_duration(report: &mut IngestionReport, stage: &str, stopwatch: Instant) {
    report
        .stage_durations
        .insert(stage.to_owned(), stopwatch.elapsed().as_millis() as u64);
}

/// Poll the query service until every cached id is visible and the set
/// of traceability claims has not changed for a full settle window.
/// Against a request-lagged replica every poll is itself a request that
/// advances replication, so a settle window of s polls guarantees that
/// any write older than the barrier becomes visible whenever the lag is
/// at most s requests deep. That closes the window in which an entity
/// exists but cannot be found by external id, which is what makes
/// duplicates possible after a cache loss.
fn lag_barrier(
    client: &WbClient,
    cache: &LocalCache,
    dict: &MappingDictionary,
    config: &IngestConfig,
) -> Result<LagBarrierOutcome, EngineError> {
    let predicate =
        ntriples::term_text(&Term::Iri(wbns::direct_claim_iri(dict.ontology_iri().property)));
    let query = format!("SELECT ?item ?value WHERE {{ ?item {predicate} ?value }}");
    let cached: BTreeSet<EntityId> = cache.ids().collect();
    let settle = config.lag_barrier_settle_polls.max(1);

    let mut polls = 0;
    let mut previous: Option<BTreeSet<(String, String)>> = None;
    let mut stable_polls = 0;
    while polls < config.lag_barrier_max_polls {
        polls += 1;
        let results = client.sparql_query(&query)?;
        let mut pairs = BTreeSet::new();
        let mut visible = BTreeSet::new();
        for row in &results.rows {
            let (Some(item), Some(value)) = (row.get("item"), row.get("value")) else {
                continue;
            };
            pairs.insert((ntriples::term_text(item), ntriples::term_text(value)));
            if let Some(id) = item.as_iri().and_then(wbns::entity_id_of) {
                visible.insert(id);
            }
        }
        let all_visible = cached.iter().all(|id| visible.contains(id));
        if all_visible && previous.as_ref() == Some(&pairs) {
            stable_polls += 1;
            if stable_polls >= settle {
                return Ok(LagBarrierOutcome { polls, settled: true });
            }
        } else {
            stable_polls = 0;
        }
        previous = Some(pairs);
        if config.lag_barrier_poll_ms > 0 {
            std::thread::sleep(std::time::Duration::from_millis(config.lag_barrier_poll_ms));
        }
    }
    Ok(LagBarrierOutcome { polls, settled: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use owlbase_client::{ApiError, ApiErrorKind};

    #[test]
    fn permanent_classification_matches_retriability() {
        let exhausted = WbError::Api(ApiError { kind: ApiErrorKind::Timeout, attempts: 5 });
        assert!(!is_permanent(&exhausted));
        let permanent = WbError::Api(ApiError {
            kind: ApiErrorKind::Permanent {
                code: "badvalue".into(),
                message: "bad".into(),
            },
            attempts: 1,
        });
        assert!(is_permanent(&permanent));
        assert!(is_permanent(&WbError::Config("x".into())));
    }

    #[test]
    fn default_config_matches_documented_defaults() {
        let config = IngestConfig::default();
        assert_eq!(config.batch_size, 50);
        assert!(config.qa_after_batch);
        assert!(!config.lag_barrier);
    }
}
