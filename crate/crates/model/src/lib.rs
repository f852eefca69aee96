//! Mapping layer between OWL ontology terms and Wikibase entities.
//!
//! This crate owns the mapping dictionary (ontology IRI to property id,
//! with datatype and routing information), the draft entities produced by
//! applying a dictionary to extracted classes and individuals, and the
//! JSON wire shape those drafts take on the way to a Wikibase API.

pub mod dict;
pub mod draft;
pub mod error;
pub mod ids;
pub mod schema;
pub mod wbns;
pub mod wire;

pub use dict::{
    load_mapping, validate_extensibility, Datatype, DictEntry, MappingDictionary, MappingKind,
};
pub use draft::{map_class, map_individual, Claim, ClaimValue, EntityDraft, EntityRef, MappedEntity};
pub use error::MapError;
pub use ids::{EntityId, PropertyId};
pub use schema::{DomainSchema, ONTOLOGY_IRI_PROPERTY, SOURCE_VOCABULARY};
pub use wire::{draft_to_wire, WireDatavalue, WireEntity, WireSnak, WireStatement, WireText, WireValue};
