//! The in-memory store behind the embedded server.
//!
//! All writes append to a single log; the SPARQL-visible triple view is
//! recomputed as a pure function of a log prefix, with the watermark
//! driven by the installed lag policy or by explicit flushes. Action-API
//! reads always see the full log (read-your-writes), which is exactly
//! the asymmetry that makes replication lag observable.

use std::collections::BTreeMap;
use std::time::{SystemTime, UNIX_EPOCH};

use chrono::DateTime;
use owlbase_model::dict::Datatype;
use owlbase_model::{wbns, EntityId, PropertyId, WireEntity, WireValue};
use owlbase_rdf::term::{Literal, Node, Term, Triple};
use owlbase_rdf::vocab;
use owlbase_rdf::Iri;
use serde::Serialize;

use crate::script::{FaultOutcome, FaultScript, OpKind, ScriptState};

/// Instant zero of the simulated clock. Timestamps in exports derive
/// from write indexes, never from the wall clock, so repeated runs
/// export byte-identical views.
const EPOCH_SECONDS: i64 = 1_704_067_200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WriteKind {
    Create,
    Amend,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropertyRecord {
    pub datatype: Datatype,
    pub entity: WireEntity,
}

#[derive(Debug, Clone)]
pub enum Snapshot {
    Item(EntityId, WireEntity),
    Property(PropertyId, PropertyRecord),
}

#[derive(Debug, Clone)]
pub struct WriteEntry {
    /// Simulated clock value at commit time.
    pub tick: u64,
    pub kind: WriteKind,
    pub snapshot: Snapshot,
}

#[derive(Debug, Clone, Serialize)]
pub struct RequestEntry {
    pub index: u64,
    pub op: OpKind,
    pub detail: String,
    pub outcome: FaultOutcome,
    pub unix_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Flushed,
    Full,
}

#[derive(Debug)]
pub struct MockState {
    items: BTreeMap<EntityId, WireEntity>,
    properties: BTreeMap<PropertyId, PropertyRecord>,
    next_q: u64,
    next_p: u64,
    write_log: Vec<WriteEntry>,
    watermark: usize,
    tick: u64,
    script: ScriptState,
    request_log: Vec<RequestEntry>,
}

impl MockState {
    pub fn new(script: FaultScript) -> MockState {
        MockState {
            items: BTreeMap::new(),
            properties: BTreeMap::new(),
            next_q: 1,
            next_p: 1,
            write_log: Vec::new(),
            watermark: 0,
            tick: 0,
            script: ScriptState::new(script),
            request_log: Vec::new(),
        }
    }

    /// Install a new script, resetting fault replay state. Existing
    /// entities and logs are kept; the lag policy switches over.
    pub fn install_script(&mut self, script: FaultScript) {
        self.script = ScriptState::new(script);
        self.advance_lag();
    }

    /// Classify and log one incoming request, advancing the simulated
    /// clock and deciding its scripted outcome.
    pub fn begin_request(&mut self, op: OpKind, detail: impl Into<String>) -> FaultOutcome {
        self.tick += 1;
        let outcome = self.script.decide(op);
        let unix_ms = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_millis() as u64)
            .unwrap_or(0);
        let mut detail = detail.into();
        detail.truncate(200);
        self.request_log.push(RequestEntry {
            index: self.request_log.len() as u64,
            op,
            detail,
            outcome,
            unix_ms,
        });
        self.advance_lag();
        outcome
    }

    fn advance_lag(&mut self) {
        match self.script.script.lag_policy {
            crate::script::LagPolicy::Fixed(k) => {
                let visible = self.write_log.len().saturating_sub(k as usize);
                self.watermark = self.watermark.max(visible);
            }
            crate::script::LagPolicy::Delay(d) => {
                while self.watermark < self.write_log.len()
                    && self.write_log[self.watermark].tick + d <= self.tick
                {
                    self.watermark += 1;
                }
            }
            crate::script::LagPolicy::ManualFlush => {}
        }
    }

    fn commit(&mut self, kind: WriteKind, snapshot: Snapshot) {
        self.write_log.push(WriteEntry { tick: self.tick, kind, snapshot });
        self.advance_lag();
    }

    pub fn create_item(&mut self, mut data: WireEntity) -> EntityId {
        let id = EntityId::new(self.next_q);
        self.next_q += 1;
        data.id = Some(id.to_string());
        data.entity_type = Some("item".to_owned());
        self.items.insert(id, data.clone());
        self.commit(WriteKind::Create, Snapshot::Item(id, data));
        id
    }

    /// Merge new content into an existing item. Labels and descriptions
    /// overwrite per language; aliases and claims append with duplicate
    /// suppression (claims compare by datavalue). A merge that changes
    /// nothing is a no-op: no log entry, no version bump.
    pub fn amend_item(&mut self, id: EntityId, data: WireEntity) -> Result<bool, String> {
        let record = self.items.get_mut(&id).ok_or_else(|| format!("no such entity {id}"))?;
        let changed = merge_entity(record, data);
        if changed {
            let snapshot = record.clone();
            self.commit(WriteKind::Amend, Snapshot::Item(id, snapshot));
        }
        Ok(changed)
    }

    /// Create a property, honoring a requested free id so servers can be
    /// seeded to match a mapping dictionary.
    pub fn create_property(
        &mut self,
        mut data: WireEntity,
        datatype: Datatype,
        requested: Option<PropertyId>,
    ) -> PropertyId {
        let id = match requested {
            Some(id) if !self.properties.contains_key(&id) => {
                self.next_p = self.next_p.max(id.number() + 1);
                id
            }
            _ => {
                while self.properties.contains_key(&PropertyId::new(self.next_p)) {
                    self.next_p += 1;
                }
                let id = PropertyId::new(self.next_p);
                self.next_p += 1;
                id
            }
        };
        data.id = Some(id.to_string());
        data.entity_type = Some("property".to_owned());
        let record = PropertyRecord { datatype, entity: data };
        self.properties.insert(id, record.clone());
        self.commit(WriteKind::Create, Snapshot::Property(id, record));
        id
    }

    pub fn item(&self, id: EntityId) -> Option<&WireEntity> {
        self.items.get(&id)
    }

    pub fn property(&self, id: PropertyId) -> Option<&PropertyRecord> {
        self.properties.get(&id)
    }

    pub fn write_log_len(&self) -> usize {
        self.write_log.len()
    }

    pub fn watermark(&self) -> usize {
        self.watermark
    }

    pub fn request_log(&self) -> &[RequestEntry] {
        &self.request_log
    }

    /// Advance the watermark to `upto` (or the full log). Flushing is
    /// monotone: a target below the current watermark leaves it alone.
    pub fn flush(&mut self, upto: Option<usize>) -> Result<usize, String> {
        let target = match upto {
            None => self.write_log.len(),
            Some(n) if n <= self.write_log.len() => n,
            Some(n) => {
                return Err(format!(
                    "flush index {n} out of range; log has {} writes",
                    self.write_log.len()
                ))
            }
        };
        self.watermark = self.watermark.max(target);
        Ok(self.watermark)
    }

    /// Materialize the RDF view of a log prefix: the flushed view stops
    /// at the watermark, the full view covers every committed write.
    pub fn view_triples(&self, view: View) -> Vec<Triple> {
        let upto = match view {
            View::Flushed => self.watermark,
            View::Full => self.write_log.len(),
        };
        let mut items: BTreeMap<EntityId, (&WireEntity, u64, usize)> = BTreeMap::new();
        let mut properties: BTreeMap<PropertyId, (&PropertyRecord, u64, usize)> = BTreeMap::new();
        for (index, entry) in self.write_log[..upto].iter().enumerate() {
            match &entry.snapshot {
                Snapshot::Item(id, record) => {
                    let slot = items.entry(*id).or_insert((record, 0, index));
                    *slot = (record, slot.1 + 1, index);
                }
                Snapshot::Property(id, record) => {
                    let slot = properties.entry(*id).or_insert((record, 0, index));
                    *slot = (record, slot.1 + 1, index);
                }
            }
        }
        let mut triples = Vec::new();
        for (id, (record, version, last_index)) in &items {
            item_triples(&mut triples, *id, record, *version, *last_index);
        }
        for (id, (record, version, last_index)) in &properties {
            property_triples(&mut triples, *id, record, *version, *last_index);
        }
        triples
    }

    /// Evaluate a query in the supported subset against the flushed view.
    pub fn sparql(&self, query: &str) -> Result<serde_json::Value, owlbase_sparql::SparqlError> {
        let parsed = owlbase_sparql::parse_query(query)?;
        let triples = self.view_triples(View::Flushed);
        let rows = owlbase_sparql::evaluate(&parsed, &triples);
        Ok(owlbase_sparql::results::to_json(&parsed.output_variables(), &rows))
    }
}

fn merge_entity(existing: &mut WireEntity, incoming: WireEntity) -> bool {
    let mut changed = false;
    for (lang, text) in incoming.labels {
        if existing.labels.get(&lang) != Some(&text) {
            existing.labels.insert(lang, text);
            changed = true;
        }
    }
    for (lang, text) in incoming.descriptions {
        if existing.descriptions.get(&lang) != Some(&text) {
            existing.descriptions.insert(lang, text);
            changed = true;
        }
    }
    for (lang, aliases) in incoming.aliases {
        let list = existing.aliases.entry(lang).or_default();
        for alias in aliases {
            if !list.contains(&alias) {
                list.push(alias);
                changed = true;
            }
        }
    }
    for (property, statements) in incoming.claims {
        let list = existing.claims.entry(property).or_default();
        for statement in statements {
            let duplicate = list
                .iter()
                .any(|s| s.mainsnak.datavalue == statement.mainsnak.datavalue);
            if !duplicate {
                list.push(statement);
                changed = true;
            }
        }
    }
    changed
}

fn timestamp_literal(write_index: usize) -> Literal {
    let instant = DateTime::from_timestamp(EPOCH_SECONDS + write_index as i64, 0)
        .expect("simulated timestamps stay in range");
    Literal::typed(instant.format("%Y-%m-%dT%H:%M:%SZ").to_string(), vocab::xsd::date_time())
        .expect("timestamp literals are well formed")
}

fn integer_literal(n: u64) -> Literal {
    Literal::typed(n.to_string(), vocab::xsd::integer()).expect("integer literals are well formed")
}

fn metadata_triples(
    triples: &mut Vec<Triple>,
    subject: &Node,
    statement_count: u64,
    version: u64,
    last_index: usize,
) {
    triples.push(Triple::new(
        subject.clone(),
        Iri::new(wbns::SCHEMA_DATE_MODIFIED.to_owned()).expect("known iri"),
        Term::Literal(timestamp_literal(last_index)),
    ));
    triples.push(Triple::new(
        subject.clone(),
        wbns::wikibase_term("statements"),
        Term::Literal(integer_literal(statement_count)),
    ));
    triples.push(Triple::new(
        subject.clone(),
        Iri::new(wbns::SCHEMA_VERSION.to_owned()).expect("known iri"),
        Term::Literal(integer_literal(version)),
    ));
}

fn claim_object(value: &owlbase_model::WireDatavalue) -> Option<Term> {
    match value.decode()? {
        WireValue::EntityRef(id) => Some(Term::Iri(wbns::entity_iri(id))),
        WireValue::Monolingual { language, text } => {
            Some(Term::Literal(Literal::lang(text, language)))
        }
        WireValue::Plain(text) => Some(Term::Literal(Literal::string(text))),
    }
}

fn item_triples(
    triples: &mut Vec<Triple>,
    id: EntityId,
    record: &WireEntity,
    version: u64,
    last_index: usize,
) {
    let subject = Node::Iri(wbns::entity_iri(id));
    triples.push(Triple::new(
        subject.clone(),
        vocab::rdf::type_(),
        Term::Iri(wbns::wikibase_term("Item")),
    ));
    for (lang, text) in &record.labels {
        triples.push(Triple::new(
            subject.clone(),
            vocab::rdfs::label(),
            Term::Literal(Literal::lang(&text.value, lang)),
        ));
    }
    for (lang, text) in &record.descriptions {
        triples.push(Triple::new(
            subject.clone(),
            Iri::new(wbns::SCHEMA_DESCRIPTION.to_owned()).expect("known iri"),
            Term::Literal(Literal::lang(&text.value, lang)),
        ));
    }
    for (lang, aliases) in &record.aliases {
        for alias in aliases {
            triples.push(Triple::new(
                subject.clone(),
                Iri::new(wbns::SKOS_ALT_LABEL.to_owned()).expect("known iri"),
                Term::Literal(Literal::lang(&alias.value, lang)),
            ));
        }
    }
    let mut statement_count = 0u64;
    for (property, statements) in &record.claims {
        for statement in statements {
            statement_count += 1;
            if let Some(object) = claim_object(&statement.mainsnak.datavalue) {
                triples.push(Triple::new(
                    subject.clone(),
                    wbns::direct_claim_iri(*property),
                    object,
                ));
            }
        }
    }
    metadata_triples(triples, &subject, statement_count, version, last_index);
}

fn property_triples(
    triples: &mut Vec<Triple>,
    id: PropertyId,
    record: &PropertyRecord,
    _version: u64,
    _last_index: usize,
) {
    let subject = Node::Iri(wbns::property_entity_iri(id));
    triples.push(Triple::new(
        subject.clone(),
        vocab::rdf::type_(),
        Term::Iri(wbns::wikibase_term("Property")),
    ));
    for (lang, text) in &record.entity.labels {
        triples.push(Triple::new(
            subject.clone(),
            vocab::rdfs::label(),
            Term::Literal(Literal::lang(&text.value, lang)),
        ));
    }
    triples.push(Triple::new(
        subject.clone(),
        wbns::wikibase_term("directClaim"),
        Term::Iri(wbns::direct_claim_iri(id)),
    ));
}
