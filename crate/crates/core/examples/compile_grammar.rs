//! Compile a grammar into an insertion system and read its language back
//! off the terminal polymers.
//!
//!     cargo run --example compile_grammar

use insertion::explorer::{verify_expression, ExpressionMap};
use insertion::grammars::{compile, render_word, to_cnf, Grammar};

fn main() {
    let g = Grammar::from_named("S", &[("S", vec!["a", "S", "b"]), ("S", vec!["a", "b"])]).unwrap();
    let cnf = to_cnf(&g).unwrap();
    println!("CNF:");
    for r in cnf.rules() {
        println!("  {}", cnf.render_rule(r));
    }

    let c = compile(&g).unwrap();
    println!("{} monomer types ({} before merging)", c.system.size(), c.emitted);

    // words up to length 6, i.e. a^n b^n for n <= 3
    let v = verify_expression(&c.system, &cnf, &ExpressionMap::for_compiled(&c), 6, 1_000_000).unwrap();
    println!("verdict: {} after {} polymers", v.verdict, v.polymers_explored);
    for img in &v.report.images {
        println!(
            "  {:>8}  {} symbols, epsilon runs {:?}",
            render_word(&img.word),
            img.string_length,
            img.runs
        );
    }
}
