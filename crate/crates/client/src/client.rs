//! The blocking client: wire encoding, retries, rate limiting, and the
//! operation surface the ingestion engine drives.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use owlbase_model::dict::Datatype;
use owlbase_model::{draft_to_wire, wbns, EntityDraft, EntityId, PropertyId, WireEntity};
use owlbase_rdf::ntriples;
use owlbase_rdf::term::{Literal, Term};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::config::EndpointConfig;
use crate::error::{ApiError, ApiErrorKind, WbError};
use crate::policy::RetryPolicy;

type Sleeper = Arc<dyn Fn(Duration) + Send + Sync>;

/// Result of an external-identifier lookup: the lowest matching id, and
/// whether more than one entity carried the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExternalIdMatch {
    pub id: EntityId,
    pub multiple: bool,
}

/// A SPARQL result table.
#[derive(Debug, Clone, PartialEq)]
pub struct SparqlResults {
    pub variables: Vec<String>,
    pub rows: Vec<BTreeMap<String, Term>>,
}

pub struct WbClient {
    http: reqwest::blocking::Client,
    config: EndpointConfig,
    policy: RetryPolicy,
    create_properties: bool,
    property_label_language: String,
    last_write: Mutex<Option<Instant>>,
    jitter: Mutex<ChaCha8Rng>,
    sleeper: Sleeper,
}

impl WbClient {
    pub fn new(config: EndpointConfig) -> Result<WbClient, WbError> {
        config.validate().map_err(WbError::Config)?;
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(30))
            .build()
            .map_err(|e| WbError::Config(format!("http client: {e}")))?;
        Ok(WbClient {
            http,
            config,
            policy: RetryPolicy::default(),
            create_properties: false,
            property_label_language: "en".to_owned(),
            last_write: Mutex::new(None),
            jitter: Mutex::new(ChaCha8Rng::from_os_rng()),
            sleeper: Arc::new(std::thread::sleep),
        })
    }

    pub fn with_policy(mut self, policy: RetryPolicy) -> Result<WbClient, WbError> {
        policy.validate().map_err(WbError::Config)?;
        self.policy = policy;
        Ok(self)
    }

    /// Allow ensure_property to create absent properties. Off by
    /// default: schema properties are normally curated by hand.
    pub fn with_property_creation(mut self, enabled: bool) -> WbClient {
        self.create_properties = enabled;
        self
    }

    pub fn with_property_label_language(mut self, language: impl Into<String>) -> WbClient {
        self.property_label_language = language.into();
        self
    }

    /// Seed the backoff jitter for reproducible delay sequences.
    pub fn with_jitter_seed(mut self, seed: u64) -> WbClient {
        self.jitter = Mutex::new(ChaCha8Rng::seed_from_u64(seed));
        self
    }

    /// Replace the sleep used for backoff and pacing; tests install a
    /// recorder here so retries take no wall-clock time.
    pub fn with_sleeper(mut self, sleeper: Sleeper) -> WbClient {
        self.sleeper = sleeper;
        self
    }

    pub fn policy(&self) -> &RetryPolicy {
        &self.policy
    }

    pub fn creates_properties(&self) -> bool {
        self.create_properties
    }

    /// Create a fresh entity from a draft. All entity references must
    /// already be resolved; retriable failures are retried per policy.
    pub fn create_entity(&self, draft: &EntityDraft) -> Result<EntityId, WbError> {
        let wire = draft_to_wire(draft)?;
        let data = serde_json::to_string(&wire).expect("wire entities serialize");
        let body = self.api_call(true, &[
            ("action", "wbeditentity"),
            ("new", "item"),
            ("data", &data),
        ])?;
        entity_id_from(&body)
    }

    /// Merge additional content into an existing entity (labels and
    /// descriptions overwrite, aliases and claims append deduplicated).
    pub fn amend_entity(&self, id: EntityId, draft: &EntityDraft) -> Result<(), WbError> {
        let wire = draft_to_wire(draft)?;
        let data = serde_json::to_string(&wire).expect("wire entities serialize");
        let id_text = id.to_string();
        self.api_call(true, &[
            ("action", "wbeditentity"),
            ("id", &id_text),
            ("data", &data),
        ])?;
        Ok(())
    }

    /// Read an entity through the action API, which always reflects
    /// every committed write regardless of replication lag.
    pub fn get_entity(&self, id: EntityId) -> Result<WireEntity, WbError> {
        let id_text = id.to_string();
        let body =
            self.api_call(false, &[("action", "wbgetentities"), ("ids", &id_text)])?;
        let record = body
            .get("entities")
            .and_then(|entities| entities.get(&id_text))
            .ok_or_else(|| WbError::NotFound { id: id_text.clone() })?;
        if record.get("missing").is_some() {
            return Err(WbError::NotFound { id: id_text });
        }
        serde_json::from_value(record.clone()).map_err(|e| {
            ApiError {
                kind: ApiErrorKind::Permanent {
                    code: "invalid-response".to_owned(),
                    message: format!("entity record does not parse: {e}"),
                },
                attempts: 1,
            }
            .into()
        })
    }

    /// Look an entity up by an identifying property value on the SPARQL
    /// endpoint. Subject to replication lag; a just-created entity may
    /// legitimately be invisible here while get_entity already sees it.
    pub fn find_by_external_id(
        &self,
        property: PropertyId,
        value: &str,
    ) -> Result<Option<ExternalIdMatch>, WbError> {
        let predicate = ntriples::term_text(&Term::Iri(wbns::direct_claim_iri(property)));
        let object = ntriples::term_text(&Term::Literal(Literal::string(value)));
        let query = format!("SELECT ?item WHERE {{ ?item {predicate} {object} }}");
        let results = self.sparql_query(&query)?;
        let mut ids: Vec<EntityId> = results
            .rows
            .iter()
            .filter_map(|row| row.get("item"))
            .filter_map(|term| term.as_iri())
            .filter_map(wbns::entity_id_of)
            .collect();
        ids.sort();
        ids.dedup();
        Ok(ids.first().map(|id| ExternalIdMatch { id: *id, multiple: ids.len() > 1 }))
    }

    /// Verify a mapped property exists with the expected datatype,
    /// creating it (label from the mapping name) when creation is
    /// enabled. A datatype mismatch is fatal: it means the server's
    /// schema disagrees with the mapping dictionary.
    pub fn ensure_property(
        &self,
        name: &str,
        expected: Datatype,
        hint: PropertyId,
    ) -> Result<PropertyId, WbError> {
        let hint_text = hint.to_string();
        let body =
            self.api_call(false, &[("action", "wbgetentities"), ("ids", &hint_text)])?;
        let record = body
            .get("entities")
            .and_then(|entities| entities.get(&hint_text))
            .cloned()
            .unwrap_or(Value::Null);
        if record.get("missing").is_none() && !record.is_null() {
            let found = record.get("datatype").cloned().unwrap_or(Value::Null);
            let found: Option<Datatype> = serde_json::from_value(found).ok();
            return match found {
                Some(datatype) if datatype == expected => Ok(hint),
                other => Err(WbError::DatatypeMismatch {
                    property: hint,
                    expected: expected.to_string(),
                    found: other.map_or_else(|| "unknown".to_owned(), |d| d.to_string()),
                }),
            };
        }
        if !self.create_properties {
            return Err(WbError::MissingProperty { name: name.to_owned(), hint });
        }
        let data = serde_json::json!({
            "id": hint_text,
            "labels": {
                &self.property_label_language: {
                    "language": &self.property_label_language,
                    "value": name,
                }
            },
            "datatype": expected,
        })
        .to_string();
        let body = self.api_call(true, &[
            ("action", "wbeditentity"),
            ("new", "property"),
            ("data", &data),
        ])?;
        let assigned = property_id_from(&body)?;
        if assigned != hint {
            return Err(WbError::PropertyIdConflict { expected: hint, assigned });
        }
        Ok(assigned)
    }

    /// Run a SELECT on the SPARQL endpoint and decode the standard JSON
    /// results format.
    pub fn sparql_query(&self, query: &str) -> Result<SparqlResults, WbError> {
        let result = self.with_retries(false, || {
            let mut request = self.http.get(&self.config.sparql_url).query(&[("query", query)]);
            if let Some(token) = &self.config.auth_token {
                request = request.bearer_auth(token);
            }
            let response = request.send().map_err(transport_kind)?;
            let status = response.status().as_u16();
            let text = response.text().map_err(transport_kind)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|_| ApiErrorKind::from_status(status, snippet(&text)))?;
            if let Some(error) = value.get("error") {
                let code = error.get("code").and_then(Value::as_str).unwrap_or("unknown");
                let info = error.get("info").and_then(Value::as_str).unwrap_or("").to_owned();
                return Err(ApiErrorKind::classify(code, &info));
            }
            if !(200..300).contains(&status) {
                return Err(ApiErrorKind::from_status(status, snippet(&text)));
            }
            Ok(value)
        });
        let value = match result {
            Ok(value) => value,
            Err(WbError::Api(ApiError {
                kind: ApiErrorKind::Permanent { code, message },
                ..
            })) if code == "malformed-query" => {
                return Err(WbError::MalformedQuery(message));
            }
            Err(e) => return Err(e),
        };
        let (variables, rows) = owlbase_sparql::results::from_json(&value).map_err(|e| {
            WbError::Api(ApiError {
                kind: ApiErrorKind::Permanent {
                    code: "invalid-response".to_owned(),
                    message: e.to_string(),
                },
                attempts: 1,
            })
        })?;
        Ok(SparqlResults { variables, rows })
    }

    fn api_call(&self, is_write: bool, params: &[(&str, &str)]) -> Result<Value, WbError> {
        self.with_retries(is_write, || {
            let mut request = if is_write {
                self.http.post(&self.config.api_url).form(params)
            } else {
                self.http.get(&self.config.api_url).query(params)
            };
            if let Some(token) = &self.config.auth_token {
                request = request.bearer_auth(token);
            }
            let response = request.send().map_err(transport_kind)?;
            let status = response.status().as_u16();
            let text = response.text().map_err(transport_kind)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|_| ApiErrorKind::from_status(status, snippet(&text)))?;
            if let Some(error) = value.get("error") {
                let code = error.get("code").and_then(Value::as_str).unwrap_or("unknown");
                let info = error.get("info").and_then(Value::as_str).unwrap_or("");
                return Err(ApiErrorKind::classify(code, info));
            }
            if !(200..300).contains(&status) {
                return Err(ApiErrorKind::from_status(status, snippet(&text)));
            }
            Ok(value)
        })
    }

    fn with_retries<T>(
        &self,
        is_write: bool,
        mut operation: impl FnMut() -> Result<T, ApiErrorKind>,
    ) -> Result<T, WbError> {
        let mut attempt = 1u32;
        loop {
            if is_write {
                self.pace_writes();
            }
            match operation() {
                Ok(value) => return Ok(value),
                Err(kind) => {
                    if !kind.retriable() || attempt >= self.policy.max_attempts {
                        return Err(ApiError { kind, attempts: attempt }.into());
                    }
                    let delay = {
                        let mut rng = self.jitter.lock().expect("jitter lock");
                        self.policy.delay_after(attempt, &mut *rng)
                    };
                    (self.sleeper)(delay);
                    attempt += 1;
                }
            }
        }
    }

    /// Enforce the write rate limit by spacing consecutive write
    /// requests at least 1/rate seconds apart.
    fn pace_writes(&self) {
        let min_interval = Duration::from_secs_f64(1.0 / self.config.edit_rate_limit);
        let mut last = self.last_write.lock().expect("rate limiter lock");
        if let Some(previous) = *last {
            let next_allowed = previous + min_interval;
            let now = Instant::now();
            if now < next_allowed {
                (self.sleeper)(next_allowed - now);
            }
        }
        *last = Some(Instant::now());
    }
}

fn transport_kind(error: reqwest::Error) -> ApiErrorKind {
    if error.is_timeout() {
        ApiErrorKind::Timeout
    } else {
        ApiErrorKind::Permanent { code: "transport".to_owned(), message: error.to_string() }
    }
}

fn snippet(text: &str) -> &str {
    match text.char_indices().nth(200) {
        Some((index, _)) => &text[..index],
        None => text,
    }
}

fn entity_id_from(body: &Value) -> Result<EntityId, WbError> {
    body.get("entity")
        .and_then(|e| e.get("id"))
        .and_then(Value::as_str)
        .and_then(|id| id.parse().ok())
        .ok_or_else(|| invalid_response("response carries no entity id"))
}

fn property_id_from(body: &Value) -> Result<PropertyId, WbError> {
    body.get("entity")
        .and_then(|e| e.get("id"))
        .and_then(Value::as_str)
        .and_then(|id| id.parse().ok())
        .ok_or_else(|| invalid_response("response carries no property id"))
}

fn invalid_response(message: &str) -> WbError {
    WbError::Api(ApiError {
        kind: ApiErrorKind::Permanent {
            code: "invalid-response".to_owned(),
            message: message.to_owned(),
        },
        attempts: 1,
    })
}
