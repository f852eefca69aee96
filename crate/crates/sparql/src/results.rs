//! SPARQL 1.1 JSON results, the interchange format between the endpoint
//! and the client.

use owlbase_rdf::term::{Literal, Term};
use owlbase_rdf::Iri;
use serde_json::{json, Value};

use crate::error::SparqlError;
use crate::eval::Binding;

const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";

pub fn to_json(vars: &[String], rows: &[Binding]) -> Value {
    let bindings: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = serde_json::Map::new();
            for (var, term) in row {
                obj.insert(var.clone(), term_to_json(term));
            }
            Value::Object(obj)
        })
        .collect();
    json!({
        "head": { "vars": vars },
        "results": { "bindings": bindings },
    })
}

fn term_to_json(term: &Term) -> Value {
    match term {
        Term::Iri(iri) => json!({ "type": "uri", "value": iri.as_str() }),
        Term::Blank(b) => json!({ "type": "bnode", "value": b }),
        Term::Literal(lit) => {
            let mut obj = serde_json::Map::new();
            obj.insert("type".to_owned(), Value::String("literal".to_owned()));
            obj.insert("value".to_owned(), Value::String(lit.lexical().to_owned()));
            if let Some(lang) = lit.language() {
                obj.insert("xml:lang".to_owned(), Value::String(lang.to_owned()));
            } else if lit.datatype().as_str() != XSD_STRING {
                obj.insert(
                    "datatype".to_owned(),
                    Value::String(lit.datatype().as_str().to_owned()),
                );
            }
            Value::Object(obj)
        }
    }
}

pub fn from_json(value: &Value) -> Result<(Vec<String>, Vec<Binding>), SparqlError> {
    let bad = |msg: &str| SparqlError::MalformedResults(msg.to_owned());
    let vars = value
        .pointer("/head/vars")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing head.vars"))?
        .iter()
        .map(|v| v.as_str().map(str::to_owned).ok_or_else(|| bad("non-string variable")))
        .collect::<Result<Vec<_>, _>>()?;
    let bindings = value
        .pointer("/results/bindings")
        .and_then(Value::as_array)
        .ok_or_else(|| bad("missing results.bindings"))?;
    let mut rows = Vec::new();
    for row in bindings {
        let obj = row.as_object().ok_or_else(|| bad("binding row is not an object"))?;
        let mut binding = Binding::new();
        for (var, term) in obj {
            binding.insert(var.clone(), term_from_json(term)?);
        }
        rows.push(binding);
    }
    Ok((vars, rows))
}

fn term_from_json(value: &Value) -> Result<Term, SparqlError> {
    let bad = |msg: String| SparqlError::MalformedResults(msg);
    let ty = value
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("term without type".to_owned()))?;
    let text = value
        .get("value")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("term without value".to_owned()))?;
    match ty {
        "uri" => Ok(Term::Iri(Iri::new(text).map_err(bad)?)),
        "bnode" => Ok(Term::Blank(text.to_owned())),
        "literal" | "typed-literal" => {
            if let Some(lang) = value.get("xml:lang").and_then(Value::as_str) {
                Ok(Term::Literal(Literal::lang(text, lang)))
            } else if let Some(dt) = value.get("datatype").and_then(Value::as_str) {
                let dt = Iri::new(dt).map_err(bad)?;
                Ok(Term::Literal(Literal::typed(text, dt).map_err(bad)?))
            } else {
                Ok(Term::Literal(Literal::string(text)))
            }
        }
        other => Err(bad(format!("unknown term type {other:?}"))),
    }
}
