//! Symbol-pair grammars and the index-arithmetic conversion from CNF.

use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use super::cfg::{GSym, Grammar, Rule};
use super::GrammarError;

/// A rule over index pairs. Binary rules store only the four indices of
/// `(a,d) -> (a,b)(c,d)`, so the outer components are preserved by
/// construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpRule {
    Binary { a: usize, b: usize, c: usize, d: usize },
    Terminal { a: usize, d: usize, t: usize },
}

impl SpRule {
    pub fn lhs(&self) -> (usize, usize) {
        match *self {
            SpRule::Binary { a, d, .. } | SpRule::Terminal { a, d, .. } => (a, d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPairGrammar {
    n: usize,
    terminals: Vec<String>,
    rules: Vec<SpRule>,
    start: (usize, usize),
}

impl SymbolPairGrammar {
    /// Rules are deduplicated, first occurrence kept.
    pub fn new(
        n: usize,
        terminals: Vec<String>,
        rules: Vec<SpRule>,
        start: (usize, usize),
    ) -> Result<Self, GrammarError> {
        let in_range = |i: usize| i < n;
        if !in_range(start.0) || !in_range(start.1) {
            return Err(GrammarError::IndexOutOfRange { n });
        }
        for r in &rules {
            let ok = match *r {
                SpRule::Binary { a, b, c, d } => [a, b, c, d].into_iter().all(in_range),
                SpRule::Terminal { a, d, t } => in_range(a) && in_range(d) && t < terminals.len(),
            };
            if !ok {
                return Err(GrammarError::IndexOutOfRange { n });
            }
        }
        let mut seen = FxHashSet::default();
        let rules = rules.into_iter().filter(|r| seen.insert(*r)).collect();
        Ok(SymbolPairGrammar {
            n,
            terminals,
            rules,
            start,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn rules(&self) -> &[SpRule] {
        &self.rules
    }

    pub fn start(&self) -> (usize, usize) {
        self.start
    }

    pub fn binary_count(&self) -> usize {
        self.rules
            .iter()
            .filter(|r| matches!(r, SpRule::Binary { .. }))
            .count()
    }

    /// The same grammar as an ordinary CFG with nonterminals named `(a,d)`.
    /// The start pair comes first; the others follow in order of first
    /// appearance.
    pub fn to_grammar(&self) -> Grammar {
        let mut names = Vec::new();
        let mut index: FxHashMap<(usize, usize), usize> = FxHashMap::default();
        let mut nt = |p: (usize, usize), names: &mut Vec<String>| {
            *index.entry(p).or_insert_with(|| {
                names.push(format!("({},{})", p.0, p.1));
                names.len() - 1
            })
        };
        nt(self.start, &mut names);
        let mut rules = Vec::new();
        for r in &self.rules {
            let lhs = nt(r.lhs(), &mut names);
            let rhs = match *r {
                SpRule::Binary { a, b, c, d } => {
                    vec![GSym::N(nt((a, b), &mut names)), GSym::N(nt((c, d), &mut names))]
                }
                SpRule::Terminal { t, .. } => vec![GSym::T(t)],
            };
            rules.push(Rule { lhs, rhs });
        }
        Grammar::from_parts(self.terminals.clone(), names, rules, 0)
    }
}

impl fmt::Display for SymbolPairGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_grammar())
    }
}

/// Nonterminal relabeling used by [`cfg_to_sp`]: the start first, then
/// every other nonterminal in order of first appearance in the rules.
pub fn relabel_order(g: &Grammar) -> Vec<usize> {
    let mut order = vec![g.start()];
    let mut seen = vec![false; g.nonterminals().len()];
    seen[g.start()] = true;
    for r in g.rules() {
        let syms = std::iter::once(GSym::N(r.lhs)).chain(r.rhs.iter().copied());
        for s in syms {
            if let GSym::N(n) = s {
                if !seen[n] {
                    seen[n] = true;
                    order.push(n);
                }
            }
        }
    }
    order
}

/// Converts a CNF grammar over nonterminals `A_0..A_{n-1}` (start `A_0`) to
/// a symbol-pair grammar: pair `(a,d)` stands for `A_{(a+d) mod n}`, and
/// every rule is replicated for each choice of the first component.
pub fn cfg_to_sp(g: &Grammar) -> Result<SymbolPairGrammar, GrammarError> {
    if !g.is_cnf() {
        return Err(GrammarError::NotCnf);
    }
    let order = relabel_order(g);
    let n = order.len();
    let mut label = vec![usize::MAX; g.nonterminals().len()];
    for (i, &nt) in order.iter().enumerate() {
        label[nt] = i;
    }
    let sub = |x: usize, y: usize| (x + n - y) % n;
    let mut rules = Vec::new();
    for r in g.rules() {
        let i = label[r.lhs];
        if i == usize::MAX {
            // nonterminal never mentioned from the start side; unreachable
            continue;
        }
        for a in 0..n {
            let d = sub(i, a);
            match r.rhs.as_slice() {
                [GSym::N(j), GSym::N(k)] => {
                    let (j, k) = (label[*j], label[*k]);
                    rules.push(SpRule::Binary {
                        a,
                        b: sub(j, a),
                        c: sub(k, d),
                        d,
                    });
                }
                [GSym::T(t)] => rules.push(SpRule::Terminal { a, d, t: *t }),
                _ => unreachable!("checked CNF"),
            }
        }
    }
    SymbolPairGrammar::new(n, g.terminals().to_vec(), rules, (0, 0))
}
