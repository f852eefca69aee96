//! HTTP wiring: the action-API subset, the SPARQL endpoint, and the
//! admin surface for scripts, flushes, logs, and exports.
//!
//! The server runs on its own thread with a single-threaded runtime, so
//! callers built on blocking clients can use it without sharing a
//! runtime. All request processing serializes through one mutex, which
//! is the "single commit point" that makes write order well defined.

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex};

use axum::extract::{Form, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use owlbase_model::dict::Datatype;
use owlbase_model::{EntityId, PropertyId, WireEntity};
use serde_json::{json, Value};
use thiserror::Error;

use crate::script::{FaultOutcome, FaultScript, OpKind};
use crate::store::{MockState, View};

#[derive(Debug, Error)]
pub enum MockError {
    #[error("failed to bind mock server: {0}")]
    Bind(String),
}

type Shared = Arc<Mutex<MockState>>;

pub struct MockServer {
    addr: SocketAddr,
    state: Shared,
    shutdown: Option<tokio::sync::oneshot::Sender<()>>,
    thread: Option<std::thread::JoinHandle<()>>,
}

impl MockServer {
    /// Start on an ephemeral local port.
    pub fn start(script: FaultScript) -> Result<MockServer, MockError> {
        MockServer::bind("127.0.0.1:0", script)
    }

    pub fn bind(addr: &str, script: FaultScript) -> Result<MockServer, MockError> {
        let state: Shared = Arc::new(Mutex::new(MockState::new(script)));
        let (shutdown_tx, shutdown_rx) = tokio::sync::oneshot::channel::<()>();
        let (addr_tx, addr_rx) = std::sync::mpsc::channel::<Result<SocketAddr, String>>();
        let served_state = state.clone();
        let bind_addr = addr.to_owned();
        let thread = std::thread::spawn(move || {
            let runtime = tokio::runtime::Builder::new_current_thread()
                .enable_all()
                .build()
                .expect("tokio runtime builds");
            runtime.block_on(async move {
                let listener = match tokio::net::TcpListener::bind(&bind_addr).await {
                    Ok(listener) => listener,
                    Err(e) => {
                        let _ = addr_tx.send(Err(e.to_string()));
                        return;
                    }
                };
                let local = listener.local_addr().expect("bound socket has an address");
                let _ = addr_tx.send(Ok(local));
                let app = router(served_state);
                axum::serve(listener, app)
                    .with_graceful_shutdown(async {
                        let _ = shutdown_rx.await;
                    })
                    .await
                    .ok();
            });
        });
        let addr = addr_rx
            .recv()
            .map_err(|_| MockError::Bind("server thread exited before binding".to_owned()))?
            .map_err(MockError::Bind)?;
        Ok(MockServer { addr, state, shutdown: Some(shutdown_tx), thread: Some(thread) })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn api_url(&self) -> String {
        format!("http://{}/api", self.addr)
    }

    pub fn sparql_url(&self) -> String {
        format!("http://{}/sparql", self.addr)
    }

    /// Direct handle on the store for in-process assertions.
    pub fn state(&self) -> Shared {
        self.state.clone()
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(thread) = self.thread.take() {
            let _ = thread.join();
        }
    }
}

fn router(state: Shared) -> Router {
    Router::new()
        .route("/api", get(action_get).post(action_post))
        .route("/sparql", get(sparql_get).post(sparql_post))
        .route("/__admin/flush", post(admin_flush))
        .route("/__admin/log", get(admin_log))
        .route("/__admin/script", post(admin_script))
        .route("/__admin/export", get(admin_export))
        .with_state(state)
}

fn api_error(code: &str, info: impl Into<String>) -> Response {
    let body = json!({"error": {"code": code, "info": info.into()}});
    (StatusCode::OK, Json(body)).into_response()
}

fn fault_error(outcome: FaultOutcome) -> Option<(&'static str, &'static str)> {
    match outcome {
        FaultOutcome::DatabaseLocked => Some(("db-lock", "the database is locked")),
        FaultOutcome::FailedSave => Some(("failed-save", "the save has failed")),
        FaultOutcome::Timeout => Some(("timeout", "the request timed out")),
        FaultOutcome::Pass => None,
    }
}

async fn action_get(
    State(state): State<Shared>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    process_action(&state, params)
}

async fn action_post(
    State(state): State<Shared>,
    Form(params): Form<HashMap<String, String>>,
) -> Response {
    process_action(&state, params)
}

fn process_action(state: &Shared, params: HashMap<String, String>) -> Response {
    let action = params.get("action").cloned().unwrap_or_default();
    match action.as_str() {
        "wbeditentity" => edit_entity(state, &params),
        "wbgetentities" => get_entities(state, &params),
        other => api_error("unknown-action", format!("unrecognized action \"{other}\"")),
    }
}

fn property_json(record: &crate::store::PropertyRecord) -> Value {
    let mut value = serde_json::to_value(&record.entity).expect("records serialize");
    value["datatype"] = serde_json::to_value(record.datatype).expect("datatypes serialize");
    value
}

fn edit_entity(state: &Shared, params: &HashMap<String, String>) -> Response {
    let mut store = state.lock().expect("store lock");
    let detail = match (params.get("new"), params.get("id")) {
        (Some(kind), _) => format!("wbeditentity new={kind}"),
        (None, Some(id)) => format!("wbeditentity id={id}"),
        (None, None) => "wbeditentity".to_owned(),
    };
    let outcome = store.begin_request(OpKind::Edit, detail);
    if let Some((code, info)) = fault_error(outcome) {
        return api_error(code, info);
    }
    let data = match params.get("data") {
        Some(data) => data,
        None => return api_error("missing-param", "the data parameter is required"),
    };
    let parsed: Result<WireEntity, _> = serde_json::from_str(data);
    let entity = match parsed {
        Ok(entity) => entity,
        Err(e) => return api_error("invalid-json", format!("data is not entity JSON: {e}")),
    };
    match (params.get("new").map(String::as_str), params.get("id")) {
        (Some("item"), None) => {
            let id = store.create_item(entity);
            let record = store.item(id).expect("created item exists");
            let body = json!({"entity": serde_json::to_value(record).expect("records serialize"), "success": 1});
            (StatusCode::OK, Json(body)).into_response()
        }
        (Some("property"), None) => {
            let raw: Value = serde_json::from_str(data).expect("validated above");
            let datatype: Datatype = match raw
                .get("datatype")
                .cloned()
                .map(serde_json::from_value)
            {
                Some(Ok(datatype)) => datatype,
                Some(Err(e)) => {
                    return api_error("invalid-json", format!("unrecognized datatype: {e}"))
                }
                None => return api_error("missing-param", "property data needs a datatype"),
            };
            let requested = raw
                .get("id")
                .and_then(Value::as_str)
                .and_then(|s| s.parse::<PropertyId>().ok());
            let id = store.create_property(entity, datatype, requested);
            let record = store.property(id).expect("created property exists");
            let body = json!({"entity": property_json(record), "success": 1});
            (StatusCode::OK, Json(body)).into_response()
        }
        (Some(other), None) => api_error("invalid-new", format!("cannot create \"{other}\"")),
        (None, Some(id)) => {
            let parsed_id: EntityId = match id.parse() {
                Ok(id) => id,
                Err(_) => {
                    return api_error("invalid-entity-id", format!("\"{id}\" is not an item id"))
                }
            };
            match store.amend_item(parsed_id, entity) {
                Ok(_changed) => {
                    let record = store.item(parsed_id).expect("amended item exists");
                    let body = json!({"entity": serde_json::to_value(record).expect("records serialize"), "success": 1});
                    (StatusCode::OK, Json(body)).into_response()
                }
                Err(info) => api_error("no-such-entity", info),
            }
        }
        (Some(_), Some(_)) => api_error("invalid-param", "new and id are mutually exclusive"),
        (None, None) => api_error("missing-param", "either new or id is required"),
    }
}

fn get_entities(state: &Shared, params: &HashMap<String, String>) -> Response {
    let mut store = state.lock().expect("store lock");
    let ids = params.get("ids").cloned().unwrap_or_default();
    let outcome = store.begin_request(OpKind::Get, format!("wbgetentities ids={ids}"));
    if let Some((code, info)) = fault_error(outcome) {
        return api_error(code, info);
    }
    if ids.is_empty() {
        return api_error("missing-param", "the ids parameter is required");
    }
    let mut entities = serde_json::Map::new();
    for raw in ids.split('|') {
        if let Ok(id) = raw.parse::<EntityId>() {
            match store.item(id) {
                Some(record) => {
                    entities.insert(
                        raw.to_owned(),
                        serde_json::to_value(record).expect("records serialize"),
                    );
                }
                None => {
                    entities.insert(raw.to_owned(), json!({"id": raw, "missing": ""}));
                }
            }
        } else if let Ok(id) = raw.parse::<PropertyId>() {
            match store.property(id) {
                Some(record) => {
                    entities.insert(raw.to_owned(), property_json(record));
                }
                None => {
                    entities.insert(raw.to_owned(), json!({"id": raw, "missing": ""}));
                }
            }
        } else {
            return api_error("invalid-entity-id", format!("\"{raw}\" is not an entity id"));
        }
    }
    (StatusCode::OK, Json(json!({"entities": entities, "success": 1}))).into_response()
}

async fn sparql_get(
    State(state): State<Shared>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    process_sparql(&state, params)
}

async fn sparql_post(
    State(state): State<Shared>,
    Form(params): Form<HashMap<String, String>>,
) -> Response {
    process_sparql(&state, params)
}

fn process_sparql(state: &Shared, params: HashMap<String, String>) -> Response {
    let mut store = state.lock().expect("store lock");
    let query = params.get("query").cloned().unwrap_or_default();
    let outcome = store.begin_request(OpKind::Sparql, format!("sparql {query}"));
    if let Some((code, info)) = fault_error(outcome) {
        let body = json!({"error": {"code": code, "info": info}});
        return (StatusCode::INTERNAL_SERVER_ERROR, Json(body)).into_response();
    }
    if query.is_empty() {
        let body = json!({"error": {"code": "malformed-query", "info": "the query parameter is required"}});
        return (StatusCode::BAD_REQUEST, Json(body)).into_response();
    }
    match store.sparql(&query) {
        Ok(results) => (StatusCode::OK, Json(results)).into_response(),
        Err(e) => {
            let body = json!({"error": {"code": "malformed-query", "info": e.to_string()}});
            (StatusCode::BAD_REQUEST, Json(body)).into_response()
        }
    }
}

async fn admin_flush(State(state): State<Shared>, body: String) -> Response {
    let mut store = state.lock().expect("store lock");
    let parsed: Value = if body.trim().is_empty() {
        json!({})
    } else {
        match serde_json::from_str(&body) {
            Ok(value) => value,
            Err(e) => {
                let body = json!({"error": format!("flush body is not JSON: {e}")});
                return (StatusCode::BAD_REQUEST, Json(body)).into_response();
            }
        }
    };
    let upto = match parsed.get("upto") {
        None => None,
        Some(Value::String(s)) if s == "all" => None,
        Some(Value::Number(n)) => match n.as_u64() {
            Some(n) => Some(n as usize),
            None => {
                let body = json!({"error": "upto must be \"all\" or a nonnegative integer"});
                return (StatusCode::BAD_REQUEST, Json(body)).into_response();
            }
        },
        Some(other) => {
            let body =
                json!({"error": format!("upto must be \"all\" or an index, got {other}")});
            return (StatusCode::BAD_REQUEST, Json(body)).into_response();
        }
    };
    match store.flush(upto) {
        Ok(watermark) => {
            (StatusCode::OK, Json(json!({"watermark": watermark}))).into_response()
        }
        Err(info) => (StatusCode::BAD_REQUEST, Json(json!({"error": info}))).into_response(),
    }
}

async fn admin_log(State(state): State<Shared>) -> Response {
    let store = state.lock().expect("store lock");
    (StatusCode::OK, Json(serde_json::to_value(store.request_log()).expect("log serializes")))
        .into_response()
}

async fn admin_script(State(state): State<Shared>, body: String) -> Response {
    match serde_json::from_str::<FaultScript>(&body) {
        Ok(script) => {
            state.lock().expect("store lock").install_script(script);
            (StatusCode::OK, Json(json!({"ok": true}))).into_response()
        }
        Err(e) => (
            StatusCode::BAD_REQUEST,
            Json(json!({"error": format!("not a fault script: {e}")})),
        )
            .into_response(),
    }
}

async fn admin_export(
    State(state): State<Shared>,
    Query(params): Query<HashMap<String, String>>,
) -> Response {
    let view = match params.get("view").map(String::as_str) {
        None | Some("flushed") => View::Flushed,
        Some("full") => View::Full,
        Some(other) => {
            let body = json!({"error": format!("view must be flushed or full, got \"{other}\"")});
            return (StatusCode::BAD_REQUEST, Json(body)).into_response();
        }
    };
    let store = state.lock().expect("store lock");
    let triples = store.view_triples(view);
    let mut text = String::new();
    for triple in &triples {
        text.push_str(&owlbase_rdf::ntriples::triple_line(triple));
        text.push('\n');
    }
    (StatusCode::OK, [(header::CONTENT_TYPE, "application/n-triples")], text).into_response()
}
