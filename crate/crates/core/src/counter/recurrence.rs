//! Subpolymer sizes per counter value and the doubling recurrence they obey.
//!
//! `P_i` is the number of monomers that end up inside a site encoding
//! counter value `i`. Inner increments duplicate, so
//! `2 P_{i+2} + 9 <= P_i <= 2 P_{i+1} + 9`, and the terminal polymer has
//! `P_0 + 2` units.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use super::{Counter, CounterSpec, CounterValue};
use crate::model::SiteGraph;

#[derive(Clone, Debug)]
pub struct RecurrenceReport {
    pub r: usize,
    /// Observed `P_i` by value index.
    pub sizes: BTreeMap<usize, BigUint>,
    pub terminal_length: BigUint,
    /// Bound checks performed.
    pub checks: usize,
    pub violations: Vec<String>,
}

impl RecurrenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the recurrence over every observed index, the floor on the
/// second-to-last value, and the terminal length.
pub fn verify_length_recurrence(
    r: usize,
    observed: &BTreeMap<usize, BigUint>,
    terminal_length: &BigUint,
) -> RecurrenceReport {
    let spec = CounterSpec { r };
    let last = spec.value_count() - 1;
    let nine = BigUint::from(9u32);
    let mut violations = Vec::new();
    let mut checks = 0;
    for (&i, p) in observed {
        if let Some(next) = observed.get(&(i + 1)) {
            checks += 1;
            let upper = next * 2u32 + &nine;
            if *p > upper {
                violations.push(format!("P_{i} = {p} exceeds 2 P_{} + 9 = {upper}", i + 1));
            }
        }
        if let Some(next2) = observed.get(&(i + 2)) {
            checks += 1;
            let lower = next2 * 2u32 + &nine;
            if *p < lower {
                violations.push(format!("P_{i} = {p} is below 2 P_{} + 9 = {lower}", i + 2));
            }
        }
    }
    if last >= 1 {
        match observed.get(&(last - 1)) {
            Some(p) if *p >= BigUint::one() => checks += 1,
            Some(p) => violations.push(format!("P_{} = {p} is below 1", last - 1)),
            None => {}
        }
    }
    if let Some(p0) = observed.get(&0) {
        checks += 1;
        let want = p0 + 2u32;
        if *terminal_length != want {
            violations.push(format!("terminal length {terminal_length} differs from P_0 + 2 = {want}"));
        }
    }
    RecurrenceReport {
        r,
        sizes: observed.clone(),
        terminal_length: terminal_length.clone(),
        checks,
        violations,
    }
}

/// `P_i` for every value, computed from the site-type closure without
/// building the polymer. Requires a deterministic, acyclic closure.
pub fn exact_sizes(counter: &Counter) -> Result<(BTreeMap<usize, BigUint>, BigUint), String> {
    let graph = SiteGraph::build(&counter.system, 1 << 22);
    if graph.is_truncated() {
        return Err("site closure truncated".into());
    }
    if let Some(n) = graph.first_branching() {
        return Err(format!(
            "site {} admits several monomers",
            counter.system.render_site(&graph.site(n))
        ));
    }
    if graph.find_cycle().is_some() {
        return Err("site closure has a cycle".into());
    }
    let fill = graph.fill_sizes();
    let mut sizes = BTreeMap::new();
    for (id, site) in graph.sites().iter().enumerate() {
        if let Some(v) = counter.spec.decode_site(site) {
            sizes.insert(counter.spec.value_index(v), fill[id].clone());
        }
    }
    let total = &fill[graph.root()] + 2u32;
    Ok((sizes, total))
}

/// Exact terminal polymer length for bound `r`.
pub fn terminal_length(r: usize) -> Result<BigUint, String> {
    let counter = Counter::generate(r).map_err(|e| e.to_string())?;
    exact_sizes(&counter).map(|(_, total)| total)
}

/// `log2` of a big integer, accurate to float precision.
pub fn log2(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 64 {
        return n.to_u64().map_or(f64::NAN, |v| (v as f64).log2());
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 bits");
    (top as f64).log2() + shift as f64
}

/// Decodes a value index back to loop variables.
pub fn value_of_index(spec: &CounterSpec, i: usize) -> CounterValue {
    let w = spec.r + 1;
    CounterValue {
        a: i / (w * w),
        c: (i / w) % w,
        b: i % w,
    }
}
