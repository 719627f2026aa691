//! Stochastic growth: one traced run, a batch of trials, and the exact
//! completion-time law they should follow.
//!
//!     cargo run --release --example simulate_kinetics

use insertion::counter::Counter;
use insertion::kinetics::{run, seed_range, trials, Caps, CompletionLaw, LawOptions};

fn main() {
    let c = Counter::generate(1).unwrap();

    let trace = run(&c.system, 42, Caps::none());
    println!(
        "seed 42: {} insertions, finished at t = {:.1} ({})",
        trace.events.len(),
        trace.elapsed,
        trace.terminated.name()
    );
    trace.verify(&c.system).expect("trace replays");
    for e in trace.events.iter().take(5) {
        println!("  t={:8.2} gap {:3} {}", e.time, e.gap, c.system.render_monomer(e.monomer));
    }

    let stats = trials(&c.system, &seed_range(0, 400), Caps::none());
    let law = CompletionLaw::compute(&c.system, LawOptions::default()).unwrap();
    println!("400 trials: mean {:.1} +- {:.1}", stats.mean, stats.std_error());
    println!("exact law:  mean {:.1}, sd {:.1}", law.mean(), law.variance().sqrt());
    for q in [0.1, 0.5, 0.9] {
        println!("  q{q}: empirical {:.1}, exact {:.1}", stats.quantile(q), law.quantile(q));
    }
}
