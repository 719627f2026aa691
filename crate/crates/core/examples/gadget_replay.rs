//! Replays the counter's increment gadgets in diamond notation: `◊` marks
//! an open site, the monomer just inserted is in bold.
//!
//!     cargo run --example gadget_replay

use insertion::counter::gadget::{verify_gadget, GadgetKind};

fn main() {
    for (kind, params) in [
        (GadgetKind::Middle, vec![1, 0]),
        (GadgetKind::Outer, vec![0]),
        (GadgetKind::Inner, vec![0, 1, 1]),
    ] {
        let trace = verify_gadget(2, kind, &params).unwrap();
        println!("{kind} {params:?}, {} insertion orders:", trace.orders);
        println!("{}\n", trace.render_diamond());
    }
}
