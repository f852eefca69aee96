//! Measurement of ontology graphs before and after ingestion.
//!
//! Feeds on a triple stream plus the mapping dictionary and produces
//! node, literal, triple and edge tallies that can be rendered as a
//! plain-text report or serialized as JSON.

mod render;
mod stats;

pub use render::{percent, render_text};
pub use stats::{
    compute_stats, compute_stats_with, EdgeTaxonomy, GraphStats, NodeTaxonomy, StatsBuilder,
    StatsOptions, TripleCategories,
};
