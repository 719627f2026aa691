//! Reads a system back as a grammar whose nonterminals are site types, and
//! checks both describe the same strings.
//!
//!     cargo run --example reverse_grammar

use insertion::explorer::terminal_strings;
use insertion::format::emit_grammar;
use insertion::grammars::{compile, enumerate_language, is_to_cfg, to_cnf, Grammar};

fn main() {
    let g = Grammar::from_named("S", &[("S", vec!["A", "B"]), ("A", vec!["a"]), ("B", vec!["b"])]).unwrap();
    let c = compile(&g).unwrap();
    let back = is_to_cfg(&c.system).unwrap();
    print!("{}", emit_grammar(&back));

    let table = c.system.symbols();
    let from_polymers = terminal_strings(&c.system, 32, 100_000);
    let from_grammar = enumerate_language(&to_cnf(&back).unwrap(), 32).unwrap();
    for s in &from_polymers.strings {
        let w: Vec<String> = s.iter().map(|&x| table.render(x)).collect();
        println!("{} (in grammar: {})", w.join(" "), from_grammar.contains(&w));
    }
}
