//! The server over real HTTP: wire shapes, scripted faults, lag, the
//! admin surface, and whole-run determinism.

use owlbase_mock::{FaultOutcome, FaultRule, FaultScript, LagPolicy, MockServer, OpKind};
use serde_json::{json, Value};

fn client() -> reqwest::blocking::Client {
    reqwest::blocking::Client::new()
}

fn edit_item(client: &reqwest::blocking::Client, server: &MockServer, data: Value) -> Value {
    client
        .post(server.api_url())
        .form(&[("action", "wbeditentity"), ("new", "item"), ("data", &data.to_string())])
        .send()
        .unwrap()
        .json()
        .unwrap()
}

fn minimal_item(label: &str, iri: &str) -> Value {
    json!({
        "labels": {"en": {"language": "en", "value": label}},
        "descriptions": {},
        "aliases": {},
        "claims": {"P3": [{
            "mainsnak": {"snaktype": "value", "property": "P3",
                          "datavalue": {"value": iri, "type": "string"}},
            "type": "statement", "rank": "normal"
        }]}
    })
}

#[test]
fn valid_create_returns_the_documented_success_shape() {
    let server = MockServer::start(FaultScript::default()).unwrap();
    let body = edit_item(&client(), &server, minimal_item("First", "http://example.org/aero#a"));
    assert_eq!(body["entity"]["id"], "Q1");
    assert_eq!(body["success"], 1);
    assert_eq!(body["entity"]["labels"]["en"]["value"], "First");
}

#[test]
fn scripted_first_write_reports_a_database_lock() {
    let script = FaultScript {
        seed: 0,
        rules: vec![FaultRule {
            op: OpKind::Edit,
            from: 0,
            to: 0,
            outcome: FaultOutcome::DatabaseLocked,
            probability: 1.0,
        }],
        lag_policy: LagPolicy::Fixed(0),
    };
    let server = MockServer::start(script).unwrap();
    let http = client();
    let first = edit_item(&http, &server, minimal_item("A", "http://example.org/aero#a"));
    assert_eq!(first["error"]["code"], "db-lock");
    // the failed attempt consumed no id
    let second = edit_item(&http, &server, minimal_item("A", "http://example.org/aero#a"));
    assert_eq!(second["entity"]["id"], "Q1");
}

#[test]
fn unsupported_sparql_constructs_are_rejected_by_name() {
    let server = MockServer::start(FaultScript::default()).unwrap();
    let response = client()
        .get(server.sparql_url())
        .query(&[("query", "SELECT ?s WHERE { OPTIONAL { ?s ?p ?o } }")])
        .send()
        .unwrap();
    assert_eq!(response.status(), 400);
    let body: Value = response.json().unwrap();
    assert_eq!(body["error"]["code"], "malformed-query");
    assert!(body["error"]["info"].as_str().unwrap().contains("OPTIONAL"));
}

#[test]
fn reads_see_writes_before_sparql_does() {
    let script = FaultScript {
        seed: 0,
        rules: Vec::new(),
        lag_policy: LagPolicy::ManualFlush,
    };
    let server = MockServer::start(script).unwrap();
    let http = client();
    let created = edit_item(&http, &server, minimal_item("Lagged", "http://example.org/aero#x"));
    assert_eq!(created["entity"]["id"], "Q1");

    // action API read-your-writes
    let got: Value = http
        .get(server.api_url())
        .query(&[("action", "wbgetentities"), ("ids", "Q1")])
        .send()
        .unwrap()
        .json()
        .unwrap();
    assert_eq!(got["entities"]["Q1"]["labels"]["en"]["value"], "Lagged");

    // SPARQL lags until flushed
    let query = "SELECT ?s WHERE { ?s <http://wikibase.example/prop/direct/P3> \"http://example.org/aero#x\" }";
    let before: Value = http
        .get(server.sparql_url())
        .query(&[("query", query)])
        .send()
        .unwrap()
        .json()
        .unwrap();
    assert_eq!(before["results"]["bindings"].as_array().unwrap().len(), 0);

    let flushed: Value = http
        .post(format!("http://{}/__admin/flush", server.addr()))
        .body(json!({"upto": "all"}).to_string())
        .send()
        .unwrap()
        .json()
        .unwrap();
    assert_eq!(flushed["watermark"], 1);

    let after: Value = http
        .get(server.sparql_url())
        .query(&[("query", query)])
        .send()
        .unwrap()
        .json()
        .unwrap();
    let bindings = after["results"]["bindings"].as_array().unwrap();
    assert_eq!(bindings.len(), 1);
    assert_eq!(bindings[0]["s"]["value"], "http://wikibase.example/entity/Q1");
}

#[test]
fn missing_entities_are_flagged_not_erred() {
    let server = MockServer::start(FaultScript::default()).unwrap();
    let got: Value = client()
        .get(server.api_url())
        .query(&[("action", "wbgetentities"), ("ids", "Q999999")])
        .send()
        .unwrap()
        .json()
        .unwrap();
    assert_eq!(got["entities"]["Q999999"]["missing"], "");
}

#[test]
fn the_request_log_records_every_api_request_in_order() {
    let server = MockServer::start(FaultScript::default()).unwrap();
    let http = client();
    edit_item(&http, &server, minimal_item("A", "http://example.org/aero#a"));
    http.get(server.sparql_url())
        .query(&[("query", "SELECT ?s WHERE { ?s ?p ?o }")])
        .send()
        .unwrap();
    http.get(server.api_url())
        .query(&[("action", "wbgetentities"), ("ids", "Q1")])
        .send()
        .unwrap();

    let log: Value = http
        .get(format!("http://{}/__admin/log", server.addr()))
        .send()
        .unwrap()
        .json()
        .unwrap();
    let entries = log.as_array().unwrap();
    assert_eq!(entries.len(), 3);
    assert_eq!(entries[0]["op"], "edit");
    assert_eq!(entries[1]["op"], "sparql");
    assert_eq!(entries[2]["op"], "get");
    assert!(entries[0]["unix_ms"].as_u64().unwrap() > 0);
}

#[test]
fn scripts_install_over_http_and_replay_deterministically() {
    let script = json!({
        "seed": 2024,
        "rules": [{"op": "edit", "outcome": "failed-save", "probability": 0.5}],
        "lag_policy": "manual-flush"
    });
    let run = || {
        let server = MockServer::start(FaultScript::default()).unwrap();
        let http = client();
        let installed = http
            .post(format!("http://{}/__admin/script", server.addr()))
            .body(script.to_string())
            .send()
            .unwrap();
        assert_eq!(installed.status(), 200);
        let mut outcomes = Vec::new();
        for i in 0..30 {
            let body = edit_item(
                &http,
                &server,
                minimal_item(&format!("Item {i}"), &format!("http://example.org/aero#i{i}")),
            );
            if let Some(id) = body["entity"]["id"].as_str() {
                outcomes.push(format!("ok {id}"));
            } else {
                outcomes.push(format!("err {}", body["error"]["code"].as_str().unwrap()));
            }
        }
        let export = http
            .get(format!("http://{}/__admin/export", server.addr()))
            .query(&[("view", "full")])
            .send()
            .unwrap()
            .text()
            .unwrap();
        (outcomes, export)
    };
    let (first_outcomes, first_export) = run();
    let (second_outcomes, second_export) = run();
    assert_eq!(first_outcomes, second_outcomes);
    assert_eq!(first_export, second_export);
    assert!(first_outcomes.iter().any(|o| o.starts_with("ok ")));
    assert!(first_outcomes.iter().any(|o| o == "err failed-save"));

    // failed saves consume no ids: successful ids are exactly Q1..Qk
    let ids: Vec<&str> = first_outcomes
        .iter()
        .filter_map(|o| o.strip_prefix("ok "))
        .collect();
    for (index, id) in ids.iter().enumerate() {
        assert_eq!(*id, format!("Q{}", index + 1));
    }
}

#[test]
fn exports_respect_the_requested_view() {
    let script = FaultScript { seed: 0, rules: Vec::new(), lag_policy: LagPolicy::ManualFlush };
    let server = MockServer::start(script).unwrap();
    let http = client();
    edit_item(&http, &server, minimal_item("Hidden", "http://example.org/aero#h"));

    let flushed = http
        .get(format!("http://{}/__admin/export", server.addr()))
        .send()
        .unwrap()
        .text()
        .unwrap();
    assert!(flushed.is_empty());

    let full = http
        .get(format!("http://{}/__admin/export", server.addr()))
        .query(&[("view", "full")])
        .send()
        .unwrap()
        .text()
        .unwrap();
    assert!(full.contains("\"Hidden\"@en"));
    assert!(full.lines().all(|line| line.ends_with(" .")));
}
