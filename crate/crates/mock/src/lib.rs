//! An embedded Wikibase stand-in for desk-scale testing: the action-API
//! subset the pipeline writes through, a SPARQL endpoint over the
//! replicated view, scripted fault injection with seeded determinism,
//! and replication lag modelled as an explicit write watermark.

pub mod script;
pub mod server;
pub mod store;

pub use script::{FaultOutcome, FaultRule, FaultScript, LagPolicy, OpKind};
pub use server::{MockError, MockServer};
pub use store::{MockState, PropertyRecord, RequestEntry, Snapshot, View, WriteEntry, WriteKind};
