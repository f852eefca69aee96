//! Parent-first ordering of class definitions.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::RdfError;
use crate::extract::ClassDef;
use crate::term::Iri;

/// Order classes so every parent precedes its children, breaking ties by
/// ascending IRI. Parents referenced but not present in the input do not
/// constrain the order. A subclass cycle is reported with one witness.
pub fn class_import_order(classes: &[ClassDef]) -> Result<Vec<ClassDef>, RdfError> {
    let by_iri: BTreeMap<&Iri, &ClassDef> = classes.iter().map(|c| (&c.iri, c)).collect();

    // children[p] = classes that list p as a parent; indegree counts only
    // parents that exist in the input
    let mut children: BTreeMap<&Iri, Vec<&Iri>> = BTreeMap::new();
    let mut indegree: BTreeMap<&Iri, usize> = BTreeMap::new();
    for class in classes {
        indegree.entry(&class.iri).or_insert(0);
        for parent in &class.parents {
            if by_iri.contains_key(parent) {
                children.entry(parent).or_default().push(&class.iri);
                *indegree.entry(&class.iri).or_insert(0) += 1;
            }
        }
    }

    let mut ready: BTreeSet<&Iri> = indegree
        .iter()
        .filter(|(_, d)| **d == 0)
        .map(|(iri, _)| *iri)
        .collect();
    let mut ordered = Vec::with_capacity(classes.len());
    while let Some(&next) = ready.iter().next() {
        ready.remove(next);
        ordered.push(by_iri[next].clone());
        for child in children.get(next).into_iter().flatten() {
            let d = indegree.get_mut(child).expect("child was indexed");
            *d -= 1;
            if *d == 0 {
                ready.insert(child);
            }
        }
    }

    if ordered.len() == classes.len() {
        return Ok(ordered);
    }

    // every remaining class sits on or below a cycle; walk parent edges
    // within the remainder until a node repeats
    let remaining: BTreeSet<&Iri> = indegree
        .iter()
        .filter(|(_, d)| **d > 0)
        .map(|(iri, _)| *iri)
        .collect();
    let start = remaining.iter().next().expect("nonempty remainder");
    let mut path: Vec<&Iri> = vec![start];
    let mut seen: BTreeSet<&Iri> = BTreeSet::new();
    seen.insert(start);
    let mut current = *start;
    loop {
        let parent = by_iri[current]
            .parents
            .iter()
            .find(|p| remaining.contains(p))
            .expect("a remaining class always has a remaining parent");
        if seen.contains(parent) {
            let cycle_starts = path.iter().position(|n| *n == parent).unwrap_or(0);
            let witness = path[cycle_starts..].iter().map(|i| (*i).clone()).collect();
            return Err(RdfError::HierarchyCycle { witness });
        }
        path.push(parent);
        seen.insert(parent);
        current = parent;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn class(iri: &str, parents: &[&str]) -> ClassDef {
        ClassDef {
            iri: Iri::new(iri).unwrap(),
            labels: BTreeMap::new(),
            description: BTreeMap::new(),
            parents: parents.iter().map(|p| Iri::new(*p).unwrap()).collect(),
            annotations: BTreeMap::new(),
        }
    }

    fn iris(classes: &[ClassDef]) -> Vec<&str> {
        classes.iter().map(|c| c.iri.as_str()).collect()
    }

    #[test]
    fn chain_orders_parent_first() {
        let classes = [
            class("http://e/C", &["http://e/B"]),
            class("http://e/A", &[]),
            class("http://e/B", &["http://e/A"]),
        ];
        let ordered = class_import_order(&classes).unwrap();
        assert_eq!(iris(&ordered), vec!["http://e/A", "http://e/B", "http://e/C"]);
    }

    #[test]
    fn no_edges_fall_back_to_iri_order() {
        let classes = [class("http://e/B", &[]), class("http://e/A", &[])];
        let ordered = class_import_order(&classes).unwrap();
        assert_eq!(iris(&ordered), vec!["http://e/A", "http://e/B"]);
    }

    #[test]
    fn two_cycle_is_reported_with_both_members() {
        let classes = [
            class("http://e/A", &["http://e/B"]),
            class("http://e/B", &["http://e/A"]),
        ];
        let err = class_import_order(&classes).unwrap_err();
        let text = err.to_string();
        assert!(text.contains("http://e/A"), "{text}");
        assert!(text.contains("http://e/B"), "{text}");
    }

    #[test]
    fn absent_parents_do_not_constrain() {
        let classes = [class("http://e/A", &["http://e/Missing"])];
        let ordered = class_import_order(&classes).unwrap();
        assert_eq!(ordered.len(), 1);
    }

    #[test]
    fn diamond_keeps_every_parent_before_its_children() {
        let classes = [
            class("http://e/D", &["http://e/B", "http://e/C"]),
            class("http://e/B", &["http://e/A"]),
            class("http://e/C", &["http://e/A"]),
            class("http://e/A", &[]),
        ];
        let ordered = class_import_order(&classes).unwrap();
        assert_eq!(
            iris(&ordered),
            vec!["http://e/A", "http://e/B", "http://e/C", "http://e/D"]
        );
    }
}
