//! Usable-site census of a system file, or of the counters when no file is
//! given.
//!
//!     cargo run --release --example site_census -- fixtures/random3.sys

use insertion::cli::analyze;
use insertion::counter::Counter;
use insertion::format::parse_system;

fn main() {
    if let Some(path) = std::env::args().nth(1) {
        let text = std::fs::read_to_string(&path).expect("readable system file");
        let sys = parse_system(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        print!("{}", analyze(&sys));
        return;
    }
    for r in 1..=3 {
        println!("-- counter r={r}");
        print!("{}", analyze(&Counter::generate(r).unwrap().system));
    }
}
