//! Usable-site census: every site a system could ever fill, counted against
//! the `4 k^{3/2}` bound, and the length bound that follows from it.

use num_bigint::BigUint;
use rustc_hash::FxHashSet;

use crate::model::{InsertionSystem, Site};

#[derive(Clone, Debug)]
pub struct SiteCensus {
    /// Usable sites, sorted.
    pub usable: Vec<Site>,
    /// Valid candidate sites examined.
    pub candidates: usize,
    /// Monomer types.
    pub k: usize,
}

impl SiteCensus {
    /// `4 k^{3/2}`, for display.
    pub fn bound(&self) -> f64 {
        4.0 * (self.k as f64).powf(1.5)
    }

    /// `|usable| <= 4 k^{3/2}`, checked as `|usable|² <= 16 k³` in integers.
    pub fn within_bound(&self) -> bool {
        let u = self.usable.len() as u128;
        let k = self.k as u128;
        u * u <= 16 * k * k * k
    }

    /// `log2(length) <= 4 k^{3/2}` for a terminal polymer of `length` units.
    pub fn length_within_bound(&self, length: &BigUint) -> bool {
        log2_within(length, self.k)
    }
}

/// `log2(n) <= 4 k^{3/2}`. Integer comparisons settle everything except
/// `2^m < n <= 2^{m+1}` with `m = floor(4 k^{3/2})`, where the exponent is
/// irrational and the comparison falls back to floating point.
pub fn log2_within(n: &BigUint, k: usize) -> bool {
    let k3 = 16 * (k as u128).pow(3);
    let bits = n.bits() as u128;
    if bits * bits <= k3 {
        return true;
    }
    // largest integer m with m² <= 16 k³
    let mut m = (k3 as f64).sqrt() as u128;
    while m * m > k3 {
        m -= 1;
    }
    while (m + 1) * (m + 1) <= k3 {
        m += 1;
    }
    let one = BigUint::from(1u8);
    if *n <= &one << (m as u64) {
        return true;
    }
    if *n > &one << (m as u64 + 1) || m * m == k3 {
        return false;
    }
    crate::counter::recurrence::log2(n) <= (k3 as f64).sqrt()
}

/// Pairs every right half (of a monomer or the initiator's left unit) with
/// every left half (of a monomer or the initiator's right unit) and keeps
/// the valid sites admitting some monomer.
pub fn usable_sites(system: &InsertionSystem) -> SiteCensus {
    let init = system.initiator();
    let mut rights: FxHashSet<[_; 2]> = system.monomers().iter().map(|m| m.right_half()).collect();
    rights.insert(init.left);
    let mut lefts: FxHashSet<[_; 2]> = system.monomers().iter().map(|m| m.left_half()).collect();
    lefts.insert(init.right);
    let mut candidates = 0;
    let mut usable = Vec::new();
    for &l in &rights {
        for &r in &lefts {
            let site = Site::new(l, r);
            if !site.is_valid() {
                continue;
            }
            candidates += 1;
            if system.is_usable(&site) {
                usable.push(site);
            }
        }
    }
    usable.sort();
    SiteCensus {
        usable,
        candidates,
        k: system.size(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::Counter;
    use crate::model::SiteGraph;

    #[test]
    fn empty_system_has_no_usable_sites() {
        let c = Counter::generate(1).unwrap();
        let bare = InsertionSystem::new(c.system.symbols().clone(), vec![], c.system.initiator());
        let census = usable_sites(&bare);
        assert!(census.usable.is_empty());
        assert_eq!(census.candidates, 1);
        assert!(census.within_bound());
    }

    #[test]
    fn census_covers_every_reachable_usable_site() {
        for r in 1..=2 {
            let c = Counter::generate(r).unwrap();
            let census = usable_sites(&c.system);
            assert!(census.within_bound());
            let graph = SiteGraph::build(&c.system, 1 << 20);
            for s in graph.sites() {
                if c.system.is_usable(s) {
                    assert!(census.usable.binary_search(s).is_ok(), "{}", c.system.render_site(s));
                }
            }
        }
    }

    #[test]
    fn log2_bound_is_exact_at_the_edge() {
        // k = 4: 4 k^{3/2} = 32 exactly
        assert!(log2_within(&(BigUint::from(1u8) << 32u32), 4));
        assert!(!log2_within(&((BigUint::from(1u8) << 32u32) + 1u8), 4));
        assert!(log2_within(&BigUint::from(245u32), 39));
    }
}
