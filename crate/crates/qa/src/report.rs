//! Finding serialization: one JSON object per line for files, aligned
//! columns for terminals.

use crate::checks::QualityFinding;

/// One finding per line as a JSON object with check, severity, subjects
/// and detail keys.
pub fn findings_to_jsonl(findings: &[QualityFinding]) -> String {
    let mut out = String::new();
    for finding in findings {
        out.push_str(&serde_json::to_string(finding).expect("findings always serialize"));
        out.push('\n');
    }
    out
}

pub fn findings_from_jsonl(text: &str) -> Result<Vec<QualityFinding>, serde_json::Error> {
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}

/// Render findings as a fixed-width terminal table. An empty slice
/// renders a single "no findings" line.
pub fn findings_table(findings: &[QualityFinding]) -> String {
    if findings.is_empty() {
        return "no findings\n".to_owned();
    }
    let mut rows: Vec<[String; 4]> = Vec::new();
    rows.push([
        "CHECK".to_owned(),
        "SEVERITY".to_owned(),
        "SUBJECTS".to_owned(),
        "DETAIL".to_owned(),
    ]);
    for finding in findings {
        let subjects = finding
            .subjects
            .iter()
            .map(|id| id.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        let severity = match finding.severity {
            crate::checks::Severity::Error => "error",
            crate::checks::Severity::Warning => "warning",
        };
        rows.push([
            finding.check.to_string(),
            severity.to_owned(),
            subjects,
            finding.detail.clone(),
        ]);
    }
    let mut widths = [0usize; 4];
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push_str("  ");
            }
            out.push_str(cell);
            if i < 3 {
                for _ in cell.chars().count()..widths[i] {
                    out.push(' ');
                }
            }
        }
        out.push('\n');
    }
    out
}
