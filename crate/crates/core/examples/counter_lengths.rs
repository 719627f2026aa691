//! Counter systems: monomer counts, exact terminal lengths from the site
//! closure, and the doubling recurrence between counter values.
//!
//!     cargo run --release --example counter_lengths

use insertion::counter::recurrence::{exact_sizes, log2, verify_length_recurrence};
use insertion::counter::{predicted_monomer_count, Counter};
use insertion::explorer::usable_sites;

fn main() {
    for r in 1..=4 {
        let c = Counter::generate(r).unwrap();
        let k = c.system.size();
        assert_eq!(k, predicted_monomer_count(r));
        let (sizes, length) = exact_sizes(&c).unwrap();
        let report = verify_length_recurrence(r, &sizes, &length);
        let census = usable_sites(&c.system);
        println!(
            "r={r}: k={k}, terminal length {length} (log2 {:.2}), {} usable sites of at most {:.0}, recurrence {}",
            log2(&length),
            census.usable.len(),
            census.bound(),
            if report.passed() { "holds" } else { "violated" }
        );
    }
}
