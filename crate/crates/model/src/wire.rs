//! The entity JSON shape spoken by both the API client and the test server.
//!
//! Wikibase's `wbeditentity` accepts a JSON document describing labels,
//! descriptions, aliases, and claims. Crucially the two sides of this
//! workspace (the HTTP client and the embedded server) must agree on the
//! bytes, so the shape lives here and nowhere else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::draft::{ClaimValue, EntityDraft, EntityRef};
use crate::error::MapError;
use crate::ids::{EntityId, PropertyId};

/// A single language text record, used for labels, descriptions, and aliases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireText {
    pub language: String,
    pub value: String,
}

/// A datavalue as it appears inside a snak. The `type` field is restricted
/// to "wikibase-entityid" and "string"; richer Wikibase value types are
/// flattened into strings on this wire.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireDatavalue {
    pub value: serde_json::Value,
    #[serde(rename = "type")]
    pub value_type: String,
}

/// The main snak of a statement. Only value snaks exist on this wire;
/// somevalue/novalue are out of scope for an ingestion-only pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireSnak {
    pub snaktype: String,
    pub property: PropertyId,
    pub datavalue: WireDatavalue,
}

/// One statement in an entity's claims list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WireStatement {
    pub mainsnak: WireSnak,
    #[serde(rename = "type")]
    pub statement_type: String,
    pub rank: String,
}

/// The full entity document. When sent to `wbeditentity` the `id` and
/// `entity_type` fields are absent; when returned from `wbgetentities`
/// the server fills them in.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct WireEntity {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    #[serde(rename = "type", skip_serializing_if = "Option::is_none")]
    pub entity_type: Option<String>,
    #[serde(default)]
    pub labels: BTreeMap<String, WireText>,
    #[serde(default)]
    pub descriptions: BTreeMap<String, WireText>,
    #[serde(default)]
    pub aliases: BTreeMap<String, Vec<WireText>>,
    #[serde(default)]
    pub claims: BTreeMap<PropertyId, Vec<WireStatement>>,
}

/// A decoded datavalue, as far as the wire allows reconstruction.
/// Time, quantity, url, and external-id values all travel as plain
/// strings and come back as `Plain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WireValue {
    EntityRef(EntityId),
    Monolingual { language: String, text: String },
    Plain(String),
}

impl WireDatavalue {
    /// Build the datavalue for a resolved claim value.
    pub fn encode(value: &ClaimValue) -> Result<WireDatavalue, MapError> {
        let (json, value_type) = match value {
            ClaimValue::EntityRef(EntityRef::Resolved(id)) => (
                serde_json::json!({
                    "entity-type": "item",
                    "id": id.to_string(),
                    "numeric-id": id.number(),
                }),
                "wikibase-entityid",
            ),
            ClaimValue::EntityRef(EntityRef::Unresolved(iri)) => {
                return Err(MapError::UnresolvedReference { iri: iri.clone() });
            }
            ClaimValue::String(s) | ClaimValue::ExternalId(s) | ClaimValue::Url(s) => {
                (serde_json::Value::String(s.clone()), "string")
            }
            ClaimValue::Time(s) => (serde_json::Value::String(s.clone()), "string"),
            ClaimValue::Quantity(n) => (serde_json::Value::String(n.to_string()), "string"),
            ClaimValue::Monolingual { language, text } => (
                serde_json::json!({ "language": language, "text": text }),
                "string",
            ),
        };
        Ok(WireDatavalue { value: json, value_type: value_type.to_owned() })
    }

    /// Interpret a datavalue received from the wire. Returns `None` for
    /// shapes this toolkit never produces.
    pub fn decode(&self) -> Option<WireValue> {
        match self.value_type.as_str() {
            "wikibase-entityid" => {
                let id = self.value.get("id")?.as_str()?;
                Some(WireValue::EntityRef(id.parse().ok()?))
            }
            "string" => match &self.value {
                serde_json::Value::String(s) => Some(WireValue::Plain(s.clone())),
                serde_json::Value::Object(map) => {
                    let language = map.get("language")?.as_str()?.to_owned();
                    let text = map.get("text")?.as_str()?.to_owned();
                    Some(WireValue::Monolingual { language, text })
                }
                _ => None,
            },
            _ => None,
        }
    }
}

impl WireStatement {
    pub fn new(property: PropertyId, datavalue: WireDatavalue) -> WireStatement {
        WireStatement {
            mainsnak: WireSnak {
                snaktype: "value".to_owned(),
                property,
                datavalue,
            },
            statement_type: "statement".to_owned(),
            rank: "normal".to_owned(),
        }
    }
}

/// Convert a fully resolved draft into the JSON document `wbeditentity`
/// expects. Fails if any entity reference is still an ontology IRI.
pub fn draft_to_wire(draft: &EntityDraft) -> Result<WireEntity, MapError> {
    let mut entity = WireEntity::default();
    for (lang, value) in &draft.labels {
        entity.labels.insert(
            lang.clone(),
            WireText { language: lang.clone(), value: value.clone() },
        );
    }
    for (lang, value) in &draft.descriptions {
        entity.descriptions.insert(
            lang.clone(),
            WireText { language: lang.clone(), value: value.clone() },
        );
    }
    for (lang, values) in &draft.aliases {
        let texts = values
            .iter()
            .map(|value| WireText { language: lang.clone(), value: value.clone() })
            .collect();
        entity.aliases.insert(lang.clone(), texts);
    }
    for claim in &draft.claims {
        let datavalue = WireDatavalue::encode(&claim.value)?;
        entity
            .claims
            .entry(claim.property)
            .or_default()
            .push(WireStatement::new(claim.property, datavalue));
    }
    Ok(entity)
}
