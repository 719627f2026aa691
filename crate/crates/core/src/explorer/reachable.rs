//! Breadth-first closure of the polymers a system can build.

use std::collections::BTreeSet;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::model::{InsertionSystem, MonomerId, Polymer, Symbol};

/// Every polymer reachable from the initiator within the caps. Polymers are
/// keyed by their exact monomer sequence.
#[derive(Clone, Debug)]
pub struct ReachableSet {
    polymers: Vec<Polymer>,
    index: FxHashMap<Vec<MonomerId>, usize>,
    /// How each polymer was first reached: parent index, gap, monomer.
    parent: Vec<Option<(usize, usize, MonomerId)>>,
    pub max_length: usize,
    pub max_count: usize,
    /// Some polymer could not be stored because of `max_count`.
    pub truncated: bool,
    /// A polymer of length `max_length + 1` is reachable, with its parent.
    pub over_length: Option<(usize, usize, MonomerId)>,
}

impl ReachableSet {
    pub fn len(&self) -> usize {
        self.polymers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.polymers.is_empty()
    }

    pub fn polymers(&self) -> &[Polymer] {
        &self.polymers
    }

    pub fn contains(&self, p: &Polymer) -> bool {
        self.index.contains_key(p.chain())
    }

    /// Indices of members with no admissible insertion.
    pub fn terminal(&self, system: &InsertionSystem) -> Vec<usize> {
        (0..self.polymers.len())
            .filter(|&i| self.polymers[i].is_terminal(system))
            .collect()
    }

    /// Insertions `(gap, monomer)` leading from the initiator to member `i`.
    pub fn path_to(&self, mut i: usize) -> Vec<(usize, MonomerId)> {
        let mut path = Vec::new();
        while let Some((p, gap, m)) = self.parent[i] {
            path.push((gap, m));
            i = p;
        }
        path.reverse();
        path
    }

    /// Finds a member with an insertion landing outside the set while
    /// staying within `max_length`. `None` for a correctly closed set.
    pub fn closure_violation(&self, system: &InsertionSystem) -> Option<(usize, usize, MonomerId)> {
        if self.truncated {
            return None;
        }
        for (i, p) in self.polymers.iter().enumerate() {
            if p.len() >= self.max_length {
                continue;
            }
            for (gap, m) in p.admissible_pairs(system) {
                let child = p.insert(system, gap, m).expect("admissible");
                if !self.contains(&child) {
                    return Some((i, gap, m));
                }
            }
        }
        None
    }
}

/// All polymers of length at most `max_length` reachable from the
/// initiator, stopping (and flagging) at `max_count` members.
pub fn reachable(system: &InsertionSystem, max_length: usize, max_count: usize) -> ReachableSet {
    let start = Polymer::initial(system);
    let mut set = ReachableSet {
        polymers: Vec::new(),
        index: FxHashMap::default(),
        parent: Vec::new(),
        max_length,
        max_count,
        truncated: false,
        over_length: None,
    };
    if max_count == 0 || start.len() > max_length {
        set.truncated = max_count == 0;
        return set;
    }
    set.index.insert(start.chain().to_vec(), 0);
    set.polymers.push(start);
    set.parent.push(None);

    let mut frontier: Vec<usize> = vec![0];
    while !frontier.is_empty() && !set.truncated {
        let expansions: Vec<Vec<(usize, MonomerId, Polymer)>> = frontier
            .par_iter()
            .map(|&i| {
                let p = &set.polymers[i];
                p.admissible_pairs(system)
                    .into_iter()
                    .map(|(gap, m)| (gap, m, p.insert(system, gap, m).expect("admissible")))
                    .collect()
            })
            .collect();
        let mut next = Vec::new();
        'outer: for (&i, children) in frontier.iter().zip(expansions) {
            for (gap, m, child) in children {
                if child.len() > max_length {
                    set.over_length.get_or_insert((i, gap, m));
                    continue;
                }
                if set.index.contains_key(child.chain()) {
                    continue;
                }
                if set.polymers.len() >= max_count {
                    set.truncated = true;
                    break 'outer;
                }
                let id = set.polymers.len();
                set.index.insert(child.chain().to_vec(), id);
                set.polymers.push(child);
                set.parent.push(Some((i, gap, m)));
                next.push(id);
            }
        }
        frontier = next;
    }
    set
}

/// Strings of the terminal polymers whose string length is at most
/// `max_string_length`: the bounded fragment of the system's language.
#[derive(Clone, Debug)]
pub struct TerminalStrings {
    pub strings: BTreeSet<Vec<Symbol>>,
    pub truncated: bool,
    pub explored: usize,
}

pub fn terminal_strings(system: &InsertionSystem, max_string_length: usize, max_count: usize) -> TerminalStrings {
    // a polymer of length n spells 4n - 4 symbols
    let max_length = (max_string_length + 4) / 4;
    let set = reachable(system, max_length, max_count);
    let strings = set
        .terminal(system)
        .into_iter()
        .map(|i| set.polymers()[i].string_repr(system))
        .collect();
    TerminalStrings {
        strings,
        truncated: set.truncated,
        explored: set.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::Counter;
    use crate::grammars::{compile, Grammar};

    fn ab() -> crate::grammars::Compiled {
        let g = Grammar::from_named(
            "S",
            &[
                ("S", vec!["A", "B"]),
                ("A", vec!["a"]),
                ("B", vec!["b"]),
            ],
        )
        .unwrap();
        compile(&g).unwrap()
    }

    #[test]
    fn no_monomers_leaves_the_initiator() {
        let c = Counter::generate(1).unwrap();
        let bare = InsertionSystem::new(c.system.symbols().clone(), vec![], c.system.initiator());
        let set = reachable(&bare, 10, 100);
        assert_eq!(set.len(), 1);
        assert_eq!(set.terminal(&bare), vec![0]);
        let strings = terminal_strings(&bare, 100, 100);
        assert_eq!(strings.strings.len(), 1);
        assert_eq!(strings.strings.iter().next().unwrap().len(), 4);
    }

    #[test]
    fn ab_system_has_one_terminal_polymer() {
        let c = ab();
        let set = reachable(&c.system, 7, 10_000);
        assert!(!set.truncated);
        let terms = set.terminal(&c.system);
        assert_eq!(terms.len(), 1);
        let p = &set.polymers()[terms[0]];
        assert_eq!(p.len(), 7);
        assert_eq!(p.string_repr(&c.system).len(), 24);
        assert_eq!(set.closure_violation(&c.system), None);
        // the recorded path rebuilds it
        let mut q = Polymer::initial(&c.system);
        for (gap, m) in set.path_to(terms[0]) {
            q = q.insert(&c.system, gap, m).unwrap();
        }
        assert_eq!(&q, p);
    }

    #[test]
    fn count_cap_is_flagged() {
        let c = Counter::generate(1).unwrap();
        let set = reachable(&c.system, 245, 50);
        assert!(set.truncated);
        assert_eq!(set.len(), 50);
    }

    #[test]
    fn length_cap_records_longer_polymers() {
        let c = Counter::generate(1).unwrap();
        let set = reachable(&c.system, 6, 100_000);
        assert!(!set.truncated);
        assert!(set.over_length.is_some());
        assert!(set.polymers().iter().all(|p| p.len() <= 6));
        assert_eq!(set.closure_violation(&c.system), None);
    }
}
