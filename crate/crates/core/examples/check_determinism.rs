//! Determinism verdicts: exhaustive over site types, stochastic with a
//! per-step audit, and a counterexample when two monomers compete.
//!
//!     cargo run --release --example check_determinism

use insertion::cli::describe_determinism;
use insertion::counter::Counter;
use insertion::explorer::{verify_deterministic_exhaustive, verify_deterministic_stochastic};
use insertion::format::parse_system;
use insertion::kinetics::{seed_range, Caps};

fn main() {
    let c = Counter::generate(2).unwrap();
    println!("counter r=2, site closure:");
    print!("{}", describe_determinism(&c.system, &verify_deterministic_exhaustive(&c.system, 1 << 20)));

    println!("\ncounter r=2, 8 audited runs:");
    let v = verify_deterministic_stochastic(&c.system, &seed_range(0, 8), Caps::none());
    print!("{}", describe_determinism(&c.system, &v));

    // two monomers fit the initiator site
    let forked = parse_system(
        "initiator (a b) (c a*)\n\
         monomer (b* x y c*) + 1\n\
         monomer (b* z w c*) + 1\n",
    )
    .unwrap();
    println!("\nforked system:");
    print!("{}", describe_determinism(&forked, &verify_deterministic_exhaustive(&forked, 16)));
}
