//! CYK and the length-bounded enumerator against a naive leftmost-derivation
//! search, on random CNF grammars.

use std::collections::{BTreeSet, VecDeque};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use insertion::grammars::{cyk, enumerate_language, random_cnf, GSym, Grammar, Word};

/// Every word of at most `max_len` letters with a leftmost derivation. CNF
/// has no rule that shortens a sentential form, so longer forms are dropped.
fn derivations(g: &Grammar, max_len: usize) -> BTreeSet<Word> {
    let mut seen: BTreeSet<Vec<GSym>> = BTreeSet::new();
    let mut queue = VecDeque::from([vec![GSym::N(g.start())]]);
    let mut words = BTreeSet::new();
    while let Some(form) = queue.pop_front() {
        let Some(i) = form.iter().position(|s| matches!(s, GSym::N(_))) else {
            words.insert(form.iter().map(|&s| g.symbol_name(s).to_string()).collect());
            continue;
        };
        let GSym::N(a) = form[i] else { unreachable!() };
        for r in g.rules_for(a) {
            let next: Vec<GSym> = form[..i].iter().chain(&r.rhs).chain(&form[i + 1..]).copied().collect();
            if next.len() <= max_len && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    words
}

fn all_words(alphabet: &[&str], max_len: usize) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |a| [w.clone(), vec![a.to_string()]].concat()))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyk_and_enumeration_agree_with_derivations(seed in any::<u64>(), nts in 1usize..=3, binary in 0usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_cnf(&mut rng, nts, &["a", "b"], binary);
        let max_len = 8;
        let derived = derivations(&g, max_len);
        prop_assert_eq!(&enumerate_language(&g, max_len).unwrap(), &derived);
        for w in all_words(&["a", "b"], max_len) {
            prop_assert_eq!(cyk(&g, &w).unwrap(), derived.contains(&w), "word {:?}", w);
        }
    }
}

#[test]
fn fixture_grammar_is_reproducible() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let g = random_cnf(&mut rng, 3, &["a", "b"], 4);
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/random3.grammar")).unwrap();
    assert_eq!(insertion::format::emit_grammar(&g), text);
}
