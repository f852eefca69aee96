//! Entity drafts and the ClassDef/IndividualDef to draft conversion.

use std::collections::BTreeMap;

use owlbase_rdf::term::Literal;
use owlbase_rdf::{ClassDef, IndividualDef, Iri};

use crate::dict::{Datatype, DictEntry, MappingDictionary, MappingKind, ALIAS_NAME};
use crate::error::MapError;
use crate::ids::{EntityId, PropertyId};

/// A claim target that may still be an ontology IRI awaiting resolution.
/// Mapping never touches the network; the ingestion engine swaps these
/// for entity ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum EntityRef {
    Resolved(EntityId),
    Unresolved(Iri),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum ClaimValue {
    EntityRef(EntityRef),
    String(String),
    ExternalId(String),
    Url(String),
    /// An RFC 3339 timestamp, validated at mapping time.
    Time(String),
    Quantity(i64),
    Monolingual {
        language: String,
        text: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Claim {
    pub property: PropertyId,
    pub value: ClaimValue,
}

/// Everything needed to create one Wikibase item.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EntityDraft {
    pub labels: BTreeMap<String, String>,
    pub descriptions: BTreeMap<String, String>,
    pub aliases: BTreeMap<String, Vec<String>>,
    pub claims: Vec<Claim>,
    /// The ontology IRI this draft realizes; also carried as a claim.
    pub source_iri: Iri,
}

impl EntityDraft {
    pub fn new(source_iri: Iri) -> EntityDraft {
        EntityDraft {
            labels: BTreeMap::new(),
            descriptions: BTreeMap::new(),
            aliases: BTreeMap::new(),
            claims: Vec::new(),
            source_iri,
        }
    }

    /// Substitute resolved ids for unresolved references using the given
    /// lookup; references the lookup cannot resolve are left in place.
    pub fn resolve_refs(&mut self, mut lookup: impl FnMut(&Iri) -> Option<EntityId>) {
        for claim in &mut self.claims {
            if let ClaimValue::EntityRef(EntityRef::Unresolved(iri)) = &claim.value {
                if let Some(id) = lookup(iri) {
                    claim.value = ClaimValue::EntityRef(EntityRef::Resolved(id));
                }
            }
        }
    }

    /// IRIs of all still-unresolved entity references.
    pub fn unresolved_refs(&self) -> Vec<&Iri> {
        self.claims
            .iter()
            .filter_map(|c| match &c.value {
                ClaimValue::EntityRef(EntityRef::Unresolved(iri)) => Some(iri),
                _ => None,
            })
            .collect()
    }
}

/// A draft plus the ontology properties that were skipped because the
/// dictionary does not map them (lenient mode only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MappedEntity {
    pub draft: EntityDraft,
    pub skipped: Vec<Iri>,
}

/// Build the draft for a class: subclass-of claims for its parents plus
/// the traceability claim carrying its ontology IRI.
pub fn map_class(cls: &ClassDef, dict: &MappingDictionary) -> Result<MappedEntity, MapError> {
    let mut draft = EntityDraft {
        labels: cls.labels.clone(),
        descriptions: cls.description.clone(),
        aliases: BTreeMap::new(),
        claims: Vec::new(),
        source_iri: cls.iri.clone(),
    };
    let mut skipped = Vec::new();

    let subclass_of = dict.subclass_of();
    for parent in &cls.parents {
        draft.claims.push(Claim {
            property: subclass_of.property,
            value: ClaimValue::EntityRef(EntityRef::Unresolved(parent.clone())),
        });
    }

    for (prop, literals) in &cls.annotations {
        let Some(entry) = lookup(dict, prop, &mut skipped)? else {
            continue;
        };
        for lit in literals {
            if entry.kind == MappingKind::Annotation && entry.name == ALIAS_NAME {
                push_alias(&mut draft, lit, &dict.label_language);
            } else {
                draft.claims.push(Claim {
                    property: entry.property,
                    value: literal_value(entry, lit, &dict.label_language)?,
                });
            }
        }
    }

    push_ontology_iri_claim(&mut draft, dict)?;
    dedupe_aliases(&mut draft);
    Ok(MappedEntity { draft, skipped })
}

/// Build the draft for an individual: instance-of claims for its types,
/// claims for object assertions, annotations and external ids, aliases on
/// the entity itself, and the traceability claim.
pub fn map_individual(
    ind: &IndividualDef,
    dict: &MappingDictionary,
) -> Result<MappedEntity, MapError> {
    let mut draft = EntityDraft {
        labels: ind.labels.clone(),
        descriptions: ind.description.clone(),
        aliases: BTreeMap::new(),
        claims: Vec::new(),
        source_iri: ind.iri.clone(),
    };
    let mut skipped = Vec::new();

    let instance_of = dict.instance_of();
    for class_iri in &ind.types {
        draft.claims.push(Claim {
            property: instance_of.property,
            value: ClaimValue::EntityRef(EntityRef::Unresolved(class_iri.clone())),
        });
    }

    for (prop, target) in &ind.object_assertions {
        let Some(entry) = lookup(dict, prop, &mut skipped)? else {
            continue;
        };
        let value = match entry.datatype {
            Datatype::ItemRef => ClaimValue::EntityRef(EntityRef::Unresolved(target.clone())),
            Datatype::Url => ClaimValue::Url(target.as_str().to_string()),
            Datatype::ExternalId => ClaimValue::ExternalId(target.as_str().to_string()),
            Datatype::String => ClaimValue::String(target.as_str().to_string()),
            other => {
                return Err(MapError::DatatypeMismatch {
                    property: entry.property,
                    datatype: other,
                    value: target.as_str().to_string(),
                });
            }
        };
        draft.claims.push(Claim {
            property: entry.property,
            value,
        });
    }

    for (prop, literals) in &ind.annotations {
        let Some(entry) = lookup(dict, prop, &mut skipped)? else {
            continue;
        };
        for lit in literals {
            if entry.kind == MappingKind::Annotation && entry.name == ALIAS_NAME {
                push_alias(&mut draft, lit, &dict.label_language);
            } else {
                draft.claims.push(Claim {
                    property: entry.property,
                    value: literal_value(entry, lit, &dict.label_language)?,
                });
            }
        }
    }

    for (lang, value) in &ind.aliases {
        draft
            .aliases
            .entry(lang.clone())
            .or_default()
            .push(value.clone());
    }

    for (prop, value) in &ind.external_ids {
        let Some(entry) = lookup(dict, prop, &mut skipped)? else {
            continue;
        };
        let value = match entry.datatype {
            Datatype::ExternalId => ClaimValue::ExternalId(value.clone()),
            Datatype::String => ClaimValue::String(value.clone()),
            Datatype::Url => ClaimValue::Url(value.clone()),
            other => {
                return Err(MapError::DatatypeMismatch {
                    property: entry.property,
                    datatype: other,
                    value: value.clone(),
                });
            }
        };
        draft.claims.push(Claim {
            property: entry.property,
            value,
        });
    }

    push_ontology_iri_claim(&mut draft, dict)?;
    dedupe_aliases(&mut draft);
    Ok(MappedEntity { draft, skipped })
}

fn lookup<'d>(
    dict: &'d MappingDictionary,
    prop: &Iri,
    skipped: &mut Vec<Iri>,
) -> Result<Option<&'d DictEntry>, MapError> {
    match dict.get(prop) {
        Some(entry) => Ok(Some(entry)),
        None if dict.strict => Err(MapError::UnmappedProperty { iri: prop.clone() }),
        None => {
            if !skipped.contains(prop) {
                skipped.push(prop.clone());
            }
            Ok(None)
        }
    }
}

/// The traceability claim every draft ends with: the entity's own
/// ontology IRI under the structural ontology-iri property.
fn push_ontology_iri_claim(draft: &mut EntityDraft, dict: &MappingDictionary) -> Result<(), MapError> {
    let entry = dict.ontology_iri();
    let iri_text = draft.source_iri.as_str().to_string();
    let value = match entry.datatype {
        Datatype::ExternalId => ClaimValue::ExternalId(iri_text),
        Datatype::String => ClaimValue::String(iri_text),
        Datatype::Url => ClaimValue::Url(iri_text),
        other => {
            return Err(MapError::DatatypeMismatch {
                property: entry.property,
                datatype: other,
                value: iri_text,
            });
        }
    };
    draft.claims.push(Claim {
        property: entry.property,
        value,
    });
    Ok(())
}

fn push_alias(draft: &mut EntityDraft, lit: &Literal, default_lang: &str) {
    let lang = lit.language().unwrap_or(default_lang).to_string();
    draft
        .aliases
        .entry(lang)
        .or_default()
        .push(lit.lexical().to_string());
}

/// Enforce the alias invariants: per language, no duplicates and no alias
/// equal to the label.
fn dedupe_aliases(draft: &mut EntityDraft) {
    let labels = draft.labels.clone();
    for (lang, values) in &mut draft.aliases {
        let mut seen = std::collections::BTreeSet::new();
        values.retain(|v| labels.get(lang) != Some(v) && seen.insert(v.clone()));
    }
    draft.aliases.retain(|_, values| !values.is_empty());
}

/// Convert an annotation literal into the entry's claim value, failing
/// when the text cannot inhabit the declared datatype.
fn literal_value(
    entry: &DictEntry,
    lit: &Literal,
    default_lang: &str,
) -> Result<ClaimValue, MapError> {
    let text = lit.lexical().to_string();
    let mismatch = || MapError::DatatypeMismatch {
        property: entry.property,
        datatype: entry.datatype,
        value: lit.lexical().to_string(),
    };
    match entry.datatype {
        Datatype::String => Ok(ClaimValue::String(text)),
        Datatype::ExternalId => Ok(ClaimValue::ExternalId(text)),
        Datatype::Url => {
            if text.contains(':') {
                Ok(ClaimValue::Url(text))
            } else {
                Err(mismatch())
            }
        }
        Datatype::Time => {
            if chrono::DateTime::parse_from_rfc3339(&text).is_ok() {
                Ok(ClaimValue::Time(text))
            } else {
                Err(mismatch())
            }
        }
        Datatype::Quantity => text
            .parse::<i64>()
            .map(ClaimValue::Quantity)
            .map_err(|_| mismatch()),
        Datatype::MonolingualText => Ok(ClaimValue::Monolingual {
            language: lit.language().unwrap_or(default_lang).to_string(),
            text,
        }),
        Datatype::ItemRef => Err(mismatch()),
    }
}
