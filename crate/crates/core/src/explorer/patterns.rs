//! Which monomer families meet during growth of a compiled system.
//!
//! A compiled system only ever inserts a right seal between a branch and a
//! left seal, a branch or leaf between a right seal and a left seal, or a
//! left seal between a right seal and a branch, and two branch monomers
//! never end up adjacent.

use std::collections::BTreeMap;

use super::reachable::reachable;
use crate::grammars::{Compiled, Family};

pub const ALLOWED: [(Family, Family, Family); 4] = [
    (Family::Branch, Family::RightSeal, Family::LeftSeal),
    (Family::RightSeal, Family::Branch, Family::LeftSeal),
    (Family::RightSeal, Family::Leaf, Family::LeftSeal),
    (Family::RightSeal, Family::LeftSeal, Family::Branch),
];

#[derive(Clone, Debug, Default)]
pub struct PatternAudit {
    pub polymers: usize,
    pub insertions: usize,
    /// (left neighbour, inserted, right neighbour) with counts.
    pub observed: BTreeMap<(Family, Family, Family), usize>,
    pub violations: Vec<String>,
    pub truncated: bool,
}

impl PatternAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && !self.truncated
    }
}

/// Explores every polymer up to `max_length` units and classifies each
/// admissible insertion by the families around it.
pub fn audit_insertion_patterns(c: &Compiled, max_length: usize, max_count: usize) -> PatternAudit {
    let set = reachable(&c.system, max_length, max_count);
    let mut audit = PatternAudit {
        polymers: set.len(),
        truncated: set.truncated,
        ..PatternAudit::default()
    };
    for p in set.polymers() {
        let fam = c.unit_families(p);
        for w in fam.windows(2) {
            if w[0] == Family::Branch && w[1] == Family::Branch {
                audit
                    .violations
                    .push(format!("adjacent branch monomers in {}", p.render(&c.system)));
            }
        }
        for (gap, m) in p.admissible_pairs(&c.system) {
            audit.insertions += 1;
            let key = (fam[gap], c.family(m), fam[gap + 1]);
            if !ALLOWED.contains(&key) {
                audit.violations.push(format!(
                    "{} inserted between {} and {} at gap {gap} of {}",
                    key.1,
                    key.0,
                    key.2,
                    p.render(&c.system)
                ));
            }
            *audit.observed.entry(key).or_default() += 1;
        }
    }
    audit
}
