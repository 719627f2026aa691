//! Symbol-pair grammar to insertion system.
//!
//! Each binary rule `(a,d) -> (a,b)(c,d)` becomes three monomers: a branch
//! monomer that opens the two child sites, and two seal monomers that turn
//! the raw gaps on either side of the branch into sites of the child
//! shapes `(u, s_a)(s_b, u*)` and `(u, s_c)(s_d, u*)`. Each terminal rule
//! becomes one leaf monomer carrying the terminal, which kills its site.

use std::fmt;

use rustc_hash::FxHashSet;

use super::symbol_pair::{SpRule, SymbolPairGrammar};
use crate::model::{
    Concentration, Initiator, InsertionSystem, Monomer, MonomerId, Polymer, Sign, Symbol,
    SymbolTable, SystemBuilder,
};

/// Longest run of non-terminal symbols a compiled string may contain.
pub const KAPPA: usize = 16;

/// Which construction family a monomer belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `(s_b, u*, s_b*, x)-`: closes the left child site. Its left half
    /// plays the same part as the right initiator half.
    LeftSeal,
    /// `(s_a*, s_b, s_c*, s_d*)+`: applies a binary rule.
    Branch,
    /// `(x, s_c, u, s_c)-`: closes the right child site. Its right half
    /// plays the same part as the left initiator half.
    RightSeal,
    /// `(s_a*, t, x, s_d*)+`: applies a terminal rule.
    Leaf,
}

impl Family {
    /// Role of the initiator halves in the insertion-pattern analysis.
    pub const LEFT_END: Family = Family::RightSeal;
    pub const RIGHT_END: Family = Family::LeftSeal;

    pub fn name(self) -> &'static str {
        match self {
            Family::LeftSeal => "left-seal",
            Family::Branch => "branch",
            Family::RightSeal => "right-seal",
            Family::Leaf => "leaf",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A compiled system plus the bookkeeping needed to check it.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub system: InsertionSystem,
    /// Family of each monomer, by id.
    pub families: Vec<Family>,
    /// Monomers emitted before merging duplicates.
    pub emitted: usize,
    /// Symbol standing for each grammar terminal, by terminal index.
    pub terminal_symbols: Vec<Symbol>,
}

impl Compiled {
    pub fn family(&self, id: MonomerId) -> Family {
        self.families[id as usize]
    }

    /// Family of each unit of `p`, initiator halves included.
    pub fn unit_families(&self, p: &Polymer) -> Vec<Family> {
        let mut out = Vec::with_capacity(p.len());
        out.push(Family::LEFT_END);
        out.extend(p.chain().iter().map(|&m| self.family(m)));
        out.push(Family::RIGHT_END);
        out
    }

    /// Whether `s` stands for a grammar terminal.
    pub fn is_terminal_symbol(&self, s: Symbol) -> bool {
        !s.is_starred() && self.terminal_symbols.contains(&s)
    }
}

/// Picks a prefix so no internal name collides with a grammar terminal.
fn internal_prefix(n: usize, terminals: &[String]) -> String {
    let taken: FxHashSet<&str> = terminals.iter().map(String::as_str).collect();
    let mut prefix = String::new();
    loop {
        let clash = taken.contains(format!("{prefix}u").as_str())
            || taken.contains(format!("{prefix}x").as_str())
            || (0..n).any(|i| taken.contains(format!("{prefix}s{i}").as_str()));
        if !clash {
            return prefix;
        }
        prefix.push('_');
    }
}

pub fn sp_to_is(g: &SymbolPairGrammar) -> Compiled {
    let prefix = internal_prefix(g.n(), g.terminals());
    let mut table = SymbolTable::new();
    let s: Vec<Symbol> = (0..g.n())
        .map(|i| table.intern(format!("{prefix}s{i}")))
        .collect();
    let u = table.intern(format!("{prefix}u"));
    let x = table.intern(format!("{prefix}x"));
    let terminal_symbols: Vec<Symbol> = g.terminals().iter().map(|t| table.intern(t.as_str())).collect();
    let star = Symbol::complement;

    let placeholder = Concentration::fraction(1, 1);
    let mut builder = SystemBuilder::new(table);
    let mut families = Vec::new();
    let mut emitted = 0;
    let mut emit = |b: &mut SystemBuilder, quad: [Symbol; 4], sign: Sign, family: Family| {
        emitted += 1;
        if b.push(Monomer::new(quad, sign, placeholder)) {
            families.push(family);
        }
    };
    for r in g.rules() {
        match *r {
            SpRule::Binary { a, b, c, d } => {
                let (sa, sb, sc, sd) = (s[a], s[b], s[c], s[d]);
                emit(&mut builder, [sb, star(u), star(sb), x], Sign::Negative, Family::LeftSeal);
                emit(
                    &mut builder,
                    [star(sa), sb, star(sc), star(sd)],
                    Sign::Positive,
                    Family::Branch,
                );
                emit(&mut builder, [x, sc, u, sc], Sign::Negative, Family::RightSeal);
            }
            SpRule::Terminal { a, d, t } => {
                emit(
                    &mut builder,
                    [star(s[a]), terminal_symbols[t], x, star(s[d])],
                    Sign::Positive,
                    Family::Leaf,
                );
            }
        }
    }
    let conc = Concentration::uniform(builder.len().max(1));
    for m in builder.monomers_mut() {
        m.concentration = conc;
    }
    let (a, b) = g.start();
    let system = builder.build(Initiator::new_unchecked([u, s[a]], [s[b], star(u)]));
    Compiled {
        system,
        families,
        emitted,
        terminal_symbols,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_rule() -> Compiled {
        let g = SymbolPairGrammar::new(
            3,
            vec!["p".into(), "q".into()],
            vec![
                SpRule::Binary { a: 0, b: 1, c: 2, d: 0 },
                SpRule::Terminal { a: 0, d: 1, t: 0 },
                SpRule::Terminal { a: 2, d: 0, t: 1 },
            ],
            (0, 0),
        )
        .unwrap();
        sp_to_is(&g)
    }

    #[test]
    fn worked_example_monomers() {
        let c = one_rule();
        let sys = &c.system;
        let rendered: Vec<String> = (0..sys.size() as u32).map(|i| sys.render_monomer(i)).collect();
        assert_eq!(
            rendered,
            [
                "(s1, u*, s1*, x)-",
                "(s0*, s1, s2*, s0*)+",
                "(x, s2, u, s2)-",
                "(s0*, p, x, s1*)+",
                "(s2*, q, x, s0*)+",
            ]
        );
        assert_eq!(
            c.families,
            [Family::LeftSeal, Family::Branch, Family::RightSeal, Family::Leaf, Family::Leaf]
        );
        assert_eq!(sys.render_site(&sys.initiator().site()), "(u, s0)(s0, u*)");
        assert_eq!(c.emitted, 5);
    }

    #[test]
    fn worked_example_insertion_sequence() {
        let c = one_rule();
        let sys = &c.system;
        let p = Polymer::initial(sys);
        let p = p.insert(sys, 0, 1).unwrap();
        let p = p.insert(sys, 0, 0).unwrap();
        let p = p.insert(sys, 2, 2).unwrap();
        assert_eq!(
            p.render(sys),
            "u s0 s1 u* s1* x s0* s1 s2* s0* x s2 u s2 s0 u*"
        );
        let p = p.insert(sys, 0, 3).unwrap();
        let p = p.insert(sys, 4, 4).unwrap();
        assert!(p.is_terminal(sys));
        assert_eq!(p.string_repr(sys).len(), 16 * 2 - 8);
    }

    #[test]
    fn internal_names_avoid_terminals() {
        let g = SymbolPairGrammar::new(1, vec!["u".into()], vec![SpRule::Terminal { a: 0, d: 0, t: 0 }], (0, 0))
            .unwrap();
        let c = sp_to_is(&g);
        assert_eq!(c.system.render_monomer(0), "(_s0*, u, _x, _s0*)+");
        assert!(c.is_terminal_symbol(c.system.symbols().get("u").unwrap()));
    }

    #[test]
    fn duplicates_merge() {
        // two rules sharing (b, c) emit identical seal monomers
        let g = SymbolPairGrammar::new(
            2,
            vec!["t".into()],
            vec![
                SpRule::Binary { a: 0, b: 1, c: 1, d: 0 },
                SpRule::Binary { a: 1, b: 1, c: 1, d: 1 },
            ],
            (0, 0),
        )
        .unwrap();
        let c = sp_to_is(&g);
        assert_eq!(c.emitted, 6);
        assert_eq!(c.system.size(), 4);
    }
}
