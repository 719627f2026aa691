use std::collections::BTreeSet;
use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use super::GrammarError;

/// A right-hand-side symbol: terminal or nonterminal, by index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GSym {
    T(usize),
    N(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: usize,
    pub rhs: Vec<GSym>,
}

/// A word over a grammar's terminals, by name.
pub type Word = Vec<String>;

/// Joins a word for display. Single-character alphabets read naturally
/// (`aabb`); multi-character tokens are space-separated.
pub fn render_word(word: &[String]) -> String {
    if word.iter().all(|t| t.chars().count() == 1) {
        word.concat()
    } else {
        word.join(" ")
    }
}

/// A context-free grammar. Rules are set-valued: duplicates are merged on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    rules: Vec<Rule>,
    start: usize,
}

impl Grammar {
    /// Builds from named rules. Every left-hand name is a nonterminal (as is
    /// the start); every other name is a terminal.
    pub fn from_named(
        start: &str,
        rules: &[(impl AsRef<str>, Vec<impl AsRef<str>>)],
    ) -> Result<Grammar, GrammarError> {
        let mut nonterminals = vec![start.to_string()];
        let mut nt_index: FxHashMap<String, usize> = FxHashMap::default();
        nt_index.insert(start.to_string(), 0);
        for (lhs, _) in rules {
            let lhs = lhs.as_ref();
            if !nt_index.contains_key(lhs) {
                nt_index.insert(lhs.to_string(), nonterminals.len());
                nonterminals.push(lhs.to_string());
            }
        }
        let mut terminals = Vec::new();
        let mut t_index: FxHashMap<String, usize> = FxHashMap::default();
        let mut out = Vec::new();
        for (lhs, rhs) in rules {
            let rhs = rhs
                .iter()
                .map(|s| {
                    let s = s.as_ref();
                    if let Some(&n) = nt_index.get(s) {
                        GSym::N(n)
                    } else {
                        let t = *t_index.entry(s.to_string()).or_insert_with(|| {
                            terminals.push(s.to_string());
                            terminals.len() - 1
                        });
                        GSym::T(t)
                    }
                })
                .collect();
            out.push(Rule {
                lhs: nt_index[lhs.as_ref()],
                rhs,
            });
        }
        Ok(Grammar::from_parts(terminals, nonterminals, out, 0))
    }

    pub fn from_parts(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        rules: Vec<Rule>,
        start: usize,
    ) -> Grammar {
        let mut seen = FxHashSet::default();
        let rules = rules.into_iter().filter(|r| seen.insert(r.clone())).collect();
        Grammar {
            terminals,
            nonterminals,
            rules,
            start,
        }
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn start_name(&self) -> &str {
        &self.nonterminals[self.start]
    }

    /// Number of rules.
    pub fn size(&self) -> usize {
        self.rules.len()
    }

    pub fn symbol_name(&self, s: GSym) -> &str {
        match s {
            GSym::T(t) => &self.terminals[t],
            GSym::N(n) => &self.nonterminals[n],
        }
    }

    pub fn rules_for(&self, lhs: usize) -> impl Iterator<Item = &Rule> {
        self.rules.iter().filter(move |r| r.lhs == lhs)
    }

    /// Every rule is `A -> B C` or `A -> t`.
    pub fn is_cnf(&self) -> bool {
        self.rules.iter().all(|r| match r.rhs.as_slice() {
            [GSym::T(_)] => true,
            [GSym::N(_), GSym::N(_)] => true,
            _ => false,
        })
    }

    pub fn render_rule(&self, r: &Rule) -> String {
        let mut s = format!("{} ->", self.nonterminals[r.lhs]);
        for &sym in &r.rhs {
            s.push(' ');
            s.push_str(self.symbol_name(sym));
        }
        s
    }

    /// Nonterminals deriving the empty string.
    pub fn nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !nullable[r.lhs]
                    && r.rhs.iter().all(|s| matches!(s, GSym::N(n) if nullable[*n]))
                {
                    nullable[r.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return nullable;
            }
        }
    }

    /// Nonterminals deriving at least one terminal string.
    pub fn generating(&self) -> Vec<bool> {
        let mut gen = vec![false; self.nonterminals.len()];
        loop {
            let mut changed = false;
            for r in &self.rules {
                if !gen[r.lhs] && r.rhs.iter().all(|s| !matches!(s, GSym::N(n) if !gen[*n])) {
                    gen[r.lhs] = true;
                    changed = true;
                }
            }
            if !changed {
                return gen;
            }
        }
    }

    fn all_names(&self) -> FxHashSet<String> {
        self.terminals
            .iter()
            .chain(self.nonterminals.iter())
            .cloned()
            .collect()
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.start_name())?;
        for r in &self.rules {
            writeln!(f, "rule {}", self.render_rule(r))?;
        }
        Ok(())
    }
}

struct Names(FxHashSet<String>);

impl Names {
    fn fresh(&mut self, candidates: &[String]) -> String {
        for c in candidates {
            if self.0.insert(c.clone()) {
                return c.clone();
            }
        }
        let base = candidates.last().cloned().unwrap_or_else(|| "N".into());
        let mut name = base.clone();
        while !self.0.insert(name.clone()) {
            name.push('\'');
        }
        name
    }
}

/// Converts to Chomsky normal form with the same language.
///
/// Grammars whose language contains the empty string are rejected, as are
/// grammars with an empty language. Already-normal, reduced grammars come
/// back unchanged.
pub fn to_cnf(g: &Grammar) -> Result<Grammar, GrammarError> {
    if g.nullable()[g.start] {
        return Err(GrammarError::EmptyStringInLanguage);
    }
    let mut names = Names(g.all_names());
    let mut nts = g.nonterminals.clone();
    let mut rules: Vec<Rule> = g.rules.clone();

    // Terminals inside long rules get their own nonterminal.
    let mut term_nt: FxHashMap<usize, usize> = FxHashMap::default();
    let mut extra = Vec::new();
    for r in rules.iter_mut().filter(|r| r.rhs.len() >= 2) {
        for s in r.rhs.iter_mut() {
            if let GSym::T(t) = *s {
                let n = *term_nt.entry(t).or_insert_with(|| {
                    let tname = &g.terminals[t];
                    let name = names.fresh(&[tname.to_uppercase(), format!("T_{tname}")]);
                    nts.push(name);
                    extra.push(Rule {
                        lhs: nts.len() - 1,
                        rhs: vec![GSym::T(t)],
                    });
                    nts.len() - 1
                });
                *s = GSym::N(n);
            }
        }
    }
    rules.extend(extra);

    // Binarize.
    let mut binary = Vec::with_capacity(rules.len());
    for r in rules {
        if r.rhs.len() <= 2 {
            binary.push(r);
            continue;
        }
        let mut lhs = r.lhs;
        let k = r.rhs.len();
        for (j, &s) in r.rhs[..k - 2].iter().enumerate() {
            let name = names.fresh(&[format!("{}_{}", nts[r.lhs], j + 1)]);
            nts.push(name);
            let next = nts.len() - 1;
            binary.push(Rule {
                lhs,
                rhs: vec![s, GSym::N(next)],
            });
            lhs = next;
        }
        binary.push(Rule {
            lhs,
            rhs: r.rhs[k - 2..].to_vec(),
        });
    }

    // Remove empty productions.
    let staged = Grammar::from_parts(g.terminals.clone(), nts.clone(), binary, g.start);
    let nullable = staged.nullable();
    let mut no_eps = Vec::new();
    for r in staged.rules {
        let positions: Vec<usize> = (0..r.rhs.len())
            .filter(|&i| matches!(r.rhs[i], GSym::N(n) if nullable[n]))
            .collect();
        for mask in 0..(1u32 << positions.len()) {
            let rhs: Vec<GSym> = r
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| {
                    positions
                        .iter()
                        .position(|p| p == i)
                        .map_or(true, |bit| mask & (1 << bit) == 0)
                })
                .map(|(_, &s)| s)
                .collect();
            if !rhs.is_empty() {
                no_eps.push(Rule { lhs: r.lhs, rhs });
            }
        }
    }

    // Remove unit productions.
    let n_nt = nts.len();
    let mut unit_reach: Vec<Vec<bool>> = (0..n_nt)
        .map(|a| (0..n_nt).map(|b| a == b).collect())
        .collect();
    loop {
        let mut changed = false;
        for r in &no_eps {
            if let [GSym::N(b)] = r.rhs.as_slice() {
                for a in 0..n_nt {
                    if unit_reach[a][r.lhs] && !unit_reach[a][*b] {
                        unit_reach[a][*b] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut no_unit = Vec::new();
    for r in &no_eps {
        for a in 0..n_nt {
            if unit_reach[a][r.lhs] && !matches!(r.rhs.as_slice(), [GSym::N(_)]) {
                no_unit.push(Rule {
                    lhs: a,
                    rhs: r.rhs.clone(),
                });
            }
        }
    }
    let staged = Grammar::from_parts(g.terminals.clone(), nts, no_unit, g.start);
    reduce(&staged)
}

/// Drops non-generating and unreachable nonterminals, renumbering the rest
/// in their original order.
pub fn reduce(g: &Grammar) -> Result<Grammar, GrammarError> {
    let gen = g.generating();
    if !gen[g.start] {
        return Err(GrammarError::EmptyLanguage);
    }
    let rules: Vec<&Rule> = g
        .rules
        .iter()
        .filter(|r| gen[r.lhs] && r.rhs.iter().all(|s| !matches!(s, GSym::N(n) if !gen[*n])))
        .collect();
    let mut reach = vec![false; g.nonterminals.len()];
    reach[g.start] = true;
    let mut stack = vec![g.start];
    while let Some(a) = stack.pop() {
        for r in rules.iter().filter(|r| r.lhs == a) {
            for s in &r.rhs {
                if let GSym::N(n) = *s {
                    if !reach[n] {
                        reach[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
    }
    let mut remap = vec![usize::MAX; g.nonterminals.len()];
    let mut nts = Vec::new();
    for (i, name) in g.nonterminals.iter().enumerate() {
        if reach[i] {
            remap[i] = nts.len();
            nts.push(name.clone());
        }
    }
    let rules = rules
        .into_iter()
        .filter(|r| reach[r.lhs])
        .map(|r| Rule {
            lhs: remap[r.lhs],
            rhs: r
                .rhs
                .iter()
                .map(|&s| match s {
                    GSym::N(n) => GSym::N(remap[n]),
                    t => t,
                })
                .collect(),
        })
        .collect();
    Ok(Grammar::from_parts(
        g.terminals.clone(),
        nts,
        rules,
        remap[g.start],
    ))
}

/// Membership by the Cocke–Younger–Kasami table. Requires CNF.
pub fn cyk(g: &Grammar, word: &[impl AsRef<str>]) -> Result<bool, GrammarError> {
    if !g.is_cnf() {
        return Err(GrammarError::NotCnf);
    }
    if word.is_empty() {
        return Err(GrammarError::EmptyWord);
    }
    let t_index: FxHashMap<&str, usize> = g
        .terminals
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();
    let mut tokens = Vec::with_capacity(word.len());
    for w in word {
        match t_index.get(w.as_ref()) {
            Some(&t) => tokens.push(t),
            None => return Ok(false),
        }
    }
    let n = tokens.len();
    let k = g.nonterminals.len();
    let mut unary: Vec<Vec<usize>> = vec![Vec::new(); g.terminals.len()];
    let mut binary: Vec<(usize, usize, usize)> = Vec::new();
    for r in &g.rules {
        match r.rhs.as_slice() {
            [GSym::T(t)] => unary[*t].push(r.lhs),
            [GSym::N(b), GSym::N(c)] => binary.push((r.lhs, *b, *c)),
            _ => unreachable!("checked CNF"),
        }
    }
    // table[len-1][i][A]: A derives tokens[i..i+len]
    let mut table = vec![vec![vec![false; k]; n]; n];
    for (i, &t) in tokens.iter().enumerate() {
        for &a in &unary[t] {
            table[0][i][a] = true;
        }
    }
    for len in 2..=n {
        for i in 0..=n - len {
            for split in 1..len {
                for &(a, b, c) in &binary {
                    if !table[len - 1][i][a]
                        && table[split - 1][i][b]
                        && table[len - split - 1][i + split][c]
                    {
                        table[len - 1][i][a] = true;
                    }
                }
            }
        }
    }
    Ok(table[n - 1][0][g.start])
}

/// Default cap on words held during [`enumerate_language`].
pub const ENUMERATION_CAP: usize = 2_000_000;

/// All words of length at most `max_len`, by dynamic programming over word
/// length. Requires CNF (lengths then grow monotonically along
/// derivations, so nothing longer can shrink back into range).
pub fn enumerate_language(g: &Grammar, max_len: usize) -> Result<BTreeSet<Word>, GrammarError> {
    enumerate_language_capped(g, max_len, ENUMERATION_CAP)
}

pub fn enumerate_language_capped(
    g: &Grammar,
    max_len: usize,
    cap: usize,
) -> Result<BTreeSet<Word>, GrammarError> {
    if !g.is_cnf() {
        return Err(GrammarError::NotCnf);
    }
    let k = g.nonterminals.len();
    // by_len[len][A]
    let mut by_len: Vec<Vec<BTreeSet<Vec<usize>>>> = vec![vec![BTreeSet::new(); k]; max_len + 1];
    let mut held = 0usize;
    let mut result = BTreeSet::new();
    let render = |w: &Vec<usize>| -> Word { w.iter().map(|&t| g.terminals[t].clone()).collect() };
    for len in 1..=max_len {
        for r in &g.rules {
            match r.rhs.as_slice() {
                [GSym::T(t)] if len == 1 => {
                    if by_len[1][r.lhs].insert(vec![*t]) {
                        held += 1;
                    }
                }
                [GSym::N(b), GSym::N(c)] if len >= 2 => {
                    for split in 1..len {
                        let (lefts, rights) = (&by_len[split][*b], &by_len[len - split][*c]);
                        if lefts.is_empty() || rights.is_empty() {
                            continue;
                        }
                        let mut fresh = Vec::new();
                        for l in lefts {
                            for rr in rights {
                                let mut w = l.clone();
                                w.extend_from_slice(rr);
                                fresh.push(w);
                            }
                        }
                        for w in fresh {
                            if by_len[len][r.lhs].insert(w) {
                                held += 1;
                            }
                        }
                        if held > cap {
                            for l in 1..=len {
                                result.extend(by_len[l][g.start].iter().map(render));
                            }
                            return Err(GrammarError::EnumerationCap {
                                cap,
                                partial: result,
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        if held > cap {
            break;
        }
    }
    for l in 1..=max_len {
        result.extend(by_len[l][g.start].iter().map(render));
    }
    Ok(result)
}

/// A random CNF grammar over `terminals` with nonterminals `S, N1, N2, ...`.
/// Every nonterminal gets one terminal rule, so every one generates, plus
/// `binary` random rules `A -> B C`.
pub fn random_cnf<R: rand::Rng + ?Sized>(
    rng: &mut R,
    nonterminals: usize,
    terminals: &[&str],
    binary: usize,
) -> Grammar {
    assert!(nonterminals > 0 && !terminals.is_empty());
    let names: Vec<String> = (0..nonterminals)
        .map(|i| if i == 0 { "S".to_string() } else { format!("N{i}") })
        .collect();
    let mut rules: Vec<Rule> = (0..nonterminals)
        .map(|a| Rule {
            lhs: a,
            rhs: vec![GSym::T(rng.random_range(0..terminals.len()))],
        })
        .collect();
    for _ in 0..binary {
        rules.push(Rule {
            lhs: rng.random_range(0..nonterminals),
            rhs: vec![
                GSym::N(rng.random_range(0..nonterminals)),
                GSym::N(rng.random_range(0..nonterminals)),
            ],
        });
    }
    Grammar::from_parts(terminals.iter().map(|t| t.to_string()).collect(), names, rules, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(start: &str, rules: &[(&str, &[&str])]) -> Grammar {
        let rules: Vec<(&str, Vec<&str>)> = rules.iter().map(|(l, r)| (*l, r.to_vec())).collect();
        Grammar::from_named(start, &rules).unwrap()
    }

    fn words(list: &[&str]) -> BTreeSet<Word> {
        list.iter()
            .map(|w| w.chars().map(|c| c.to_string()).collect())
            .collect()
    }

    #[test]
    fn terminals_and_nonterminals_are_split_by_lhs() {
        let gr = g("S", &[("S", &["A", "b"]), ("A", &["a"])]);
        assert_eq!(gr.nonterminals(), ["S", "A"]);
        assert_eq!(gr.terminals(), ["b", "a"]);
        assert!(!gr.is_cnf());
    }

    #[test]
    fn cnf_of_ab() {
        let cnf = to_cnf(&g("S", &[("S", &["a", "b"])])).unwrap();
        assert!(cnf.is_cnf());
        let text = cnf.to_string();
        assert_eq!(text, "start S\nrule S -> A B\nrule A -> a\nrule B -> b\n");
    }

    #[test]
    fn cnf_is_idempotent_on_cnf_input() {
        let gr = g("S", &[("S", &["A", "B"]), ("A", &["a"]), ("B", &["b"])]);
        assert_eq!(to_cnf(&gr).unwrap(), gr);
        let cnf = to_cnf(&g("S", &[("S", &["a", "S", "b"]), ("S", &["a", "b"])])).unwrap();
        assert_eq!(to_cnf(&cnf).unwrap(), cnf);
    }

    #[test]
    fn cnf_rejects_empty_string_and_empty_language() {
        let eps: Vec<(&str, Vec<&str>)> = vec![("S", vec![]), ("S", vec!["a"])];
        let gr = Grammar::from_named("S", &eps).unwrap();
        assert_eq!(to_cnf(&gr), Err(GrammarError::EmptyStringInLanguage));
        let looping = g("S", &[("S", &["S", "a"])]);
        assert_eq!(to_cnf(&looping), Err(GrammarError::EmptyLanguage));
    }

    #[test]
    fn cnf_handles_nullable_and_unit_rules() {
        // S -> A b A | A ; A -> a | ε   language: {a, b, ab, ba, aba}
        let rules: Vec<(&str, Vec<&str>)> = vec![
            ("S", vec!["A", "b", "A"]),
            ("S", vec!["A"]),
            ("A", vec!["a"]),
            ("A", vec![]),
        ];
        let gr = Grammar::from_named("S", &rules).unwrap();
        // S is nullable through S -> A -> ε
        assert_eq!(to_cnf(&gr), Err(GrammarError::EmptyStringInLanguage));
        let rules: Vec<(&str, Vec<&str>)> = vec![
            ("S", vec!["A", "b", "A"]),
            ("S", vec!["C"]),
            ("C", vec!["a"]),
            ("A", vec!["a"]),
            ("A", vec![]),
        ];
        let gr = Grammar::from_named("S", &rules).unwrap();
        let cnf = to_cnf(&gr).unwrap();
        assert!(cnf.is_cnf());
        assert_eq!(
            enumerate_language(&cnf, 5).unwrap(),
            words(&["a", "b", "ab", "ba", "aba"])
        );
    }

    #[test]
    fn anbn_enumeration() {
        let cnf = to_cnf(&g("S", &[("S", &["a", "S", "b"]), ("S", &["a", "b"])])).unwrap();
        assert_eq!(
            enumerate_language(&cnf, 6).unwrap(),
            words(&["ab", "aabb", "aaabbb"])
        );
        assert_eq!(enumerate_language(&cnf, 7).unwrap().len(), 3);
    }

    #[test]
    fn ab_enumeration_and_membership() {
        let gr = g("S", &[("S", &["A", "B"]), ("A", &["a"]), ("B", &["b"])]);
        assert_eq!(enumerate_language(&gr, 4).unwrap(), words(&["ab"]));
        assert!(cyk(&gr, &["a", "b"]).unwrap());
        assert!(!cyk(&gr, &["b", "a"]).unwrap());
        assert!(!cyk(&gr, &["a", "q"]).unwrap());
        assert_eq!(cyk(&gr, &[] as &[&str]), Err(GrammarError::EmptyWord));
        let not_cnf = g("S", &[("S", &["a", "b"])]);
        assert_eq!(cyk(&not_cnf, &["a"]), Err(GrammarError::NotCnf));
    }

    #[test]
    fn enumeration_cap_reports_partial() {
        // (a|b)+ : 2 + 4 + 8 + ... words
        let gr = g(
            "S",
            &[("S", &["S", "S"]), ("S", &["a"]), ("S", &["b"])],
        );
        match enumerate_language_capped(&gr, 10, 100) {
            Err(GrammarError::EnumerationCap { cap, partial }) => {
                assert_eq!(cap, 100);
                assert!(partial.len() >= 6);
            }
            other => panic!("expected cap, got {other:?}"),
        }
    }
}
