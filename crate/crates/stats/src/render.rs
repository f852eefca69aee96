//! Report rendering: raw counts with whole-percent shares.

use crate::stats::GraphStats;

/// Share of `part` in `whole` as a whole percent, rounded half up.
/// An empty denominator renders as a dash instead of dividing by zero.
pub fn percent(part: u64, whole: u64) -> String {
    if whole == 0 {
        return "\u{2013}".to_owned();
    }
    let part = part as u128;
    let whole = whole as u128;
    let rounded = (200 * part + whole) / (2 * whole);
    format!("{rounded}%")
}

fn short_datatype(iri: &str) -> &str {
    iri.rsplit(['#', '/']).next().unwrap_or(iri)
}

/// Terminal-friendly summary of one stats run.
pub fn render_text(stats: &GraphStats) -> String {
    let mut out = String::new();
    let mut line = |s: String| {
        out.push_str(&s);
        out.push('\n');
    };

    line("graph statistics".to_owned());
    line("note: ambiguous counts nodes acting as both instance and class".to_owned());
    line(String::new());
    line(format!("nodes    {}", stats.node_total));
    line(format!(
        "  iri      {:>8} ({})  [{} blank]",
        stats.iri_nodes,
        percent(stats.iri_nodes, stats.node_total),
        stats.blank_nodes
    ));
    line(format!(
        "  literal  {:>8} ({})",
        stats.literal_nodes,
        percent(stats.literal_nodes, stats.node_total)
    ));

    line("literal datatypes".to_owned());
    if stats.literal_histogram.is_empty() {
        line("  none".to_owned());
    }
    for (datatype, count) in &stats.literal_histogram {
        line(format!(
            "  {:<12} {:>8} ({})",
            short_datatype(datatype),
            count,
            percent(*count, stats.literal_nodes)
        ));
    }

    line(format!("triples  {}", stats.triple_total));
    let categories = [
        ("domain", stats.triple_categories.domain),
        ("wikibase-ontology", stats.triple_categories.wikibase_ontology),
        ("other", stats.triple_categories.other),
    ];
    for (name, count) in categories {
        line(format!(
            "  {:<18} {:>8} ({})",
            name,
            count,
            percent(count, stats.triple_total)
        ));
    }

    let taxonomy_total = stats.node_taxonomy.instance
        + stats.node_taxonomy.class
        + stats.node_taxonomy.ambiguous;
    line("node taxonomy (domain triples)".to_owned());
    let taxonomy = [
        ("instance", stats.node_taxonomy.instance),
        ("class", stats.node_taxonomy.class),
        ("ambiguous", stats.node_taxonomy.ambiguous),
    ];
    for (name, count) in taxonomy {
        line(format!("  {:<10} {:>8} ({})", name, count, percent(count, taxonomy_total)));
    }

    let edge_total = stats.edge_taxonomy.object_internal
        + stats.edge_taxonomy.object_external
        + stats.edge_taxonomy.annotation;
    line("edge taxonomy".to_owned());
    let edges = [
        ("object-internal", stats.edge_taxonomy.object_internal),
        ("object-external", stats.edge_taxonomy.object_external),
        ("annotation", stats.edge_taxonomy.annotation),
    ];
    for (name, count) in edges {
        line(format!("  {:<16} {:>8} ({})", name, count, percent(count, edge_total)));
    }

    out
}
