//! The triple-loop counter: a deterministic system with O(r²) monomer
//! types whose terminal polymer has length 2^Θ(r³).
//!
//! Counter state lives in sites of the form `(s_a, s_b)(s_c, s_a*)`, with
//! `a`, `c`, `b` the outer, middle and inner loop variables. Each monomer
//! family rewrites one such site toward the next value; the inner family
//! also duplicates it.

pub mod gadget;
pub mod recurrence;

use std::fmt;

use crate::model::{
    Concentration, Initiator, InsertionSystem, Monomer, Sign, Site, Symbol, SymbolTable,
    SystemBuilder,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CounterError {
    #[error("loop bound r must be at least 1")]
    ZeroBound,
    #[error("generated {got} monomer types, expected {expected}")]
    CountMismatch { expected: usize, got: usize },
    #[error("{0}")]
    Gadget(String),
}

pub fn predicted_monomer_count(r: usize) -> usize {
    12 * r * r + 24 * r + 3
}

/// Symbol layout for bound `r`: `s_n` is symbol index `n` for
/// `n` in `0..=30r²+r`, followed by `u` and `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterSpec {
    pub r: usize,
}

impl CounterSpec {
    pub fn new(r: usize) -> Result<Self, CounterError> {
        if r == 0 {
            return Err(CounterError::ZeroBound);
        }
        Ok(CounterSpec { r })
    }

    /// Offset band `i` in 1..=15: `v + 2ir²`.
    pub fn f(&self, i: usize, v: usize) -> usize {
        debug_assert!((1..=15).contains(&i));
        v + 2 * i * self.r * self.r
    }

    pub fn max_index(&self) -> usize {
        30 * self.r * self.r + self.r
    }

    pub fn s(&self, n: usize) -> Symbol {
        debug_assert!(n <= self.max_index());
        Symbol::plain(n as u32)
    }

    pub fn u(&self) -> Symbol {
        Symbol::plain(self.max_index() as u32 + 1)
    }

    pub fn x(&self) -> Symbol {
        Symbol::plain(self.max_index() as u32 + 2)
    }

    pub fn symbol_table(&self) -> SymbolTable {
        let mut t = SymbolTable::new();
        for n in 0..=self.max_index() {
            t.intern(format!("s{n}"));
        }
        t.intern("u");
        t.intern("x");
        t
    }

    /// Number of counter values, `(r+1)³`.
    pub fn value_count(&self) -> usize {
        (self.r + 1).pow(3)
    }

    /// Position of `(a, b, c)` in loop order: inner `b` fastest, then
    /// middle `c`, then outer `a`.
    pub fn value_index(&self, v: CounterValue) -> usize {
        let w = self.r + 1;
        (v.a * w + v.c) * w + v.b
    }

    pub fn value_site(&self, v: CounterValue) -> Site {
        Site::new([self.s(v.a), self.s(v.b)], [self.s(v.c), self.s(v.a).complement()])
    }

    /// Recognizes a site of the form `(s_a, s_b)(s_c, s_a*)` with all three
    /// indices in `[0, r]`.
    pub fn decode_site(&self, site: &Site) -> Option<CounterValue> {
        let [l0, l1] = site.left;
        let [r0, r1] = site.right;
        let small = |s: Symbol| !s.is_starred() && (s.base() as usize) <= self.r;
        if small(l0) && small(l1) && small(r0) && r1 == l0.complement() {
            Some(CounterValue {
                a: l0.base() as usize,
                b: l1.base() as usize,
                c: r0.base() as usize,
            })
        } else {
            None
        }
    }

    /// The site that `v` steps to, and whether the step duplicates.
    pub fn successor(&self, v: CounterValue) -> Option<(CounterValue, Increment)> {
        let r = self.r;
        if v.b < r {
            Some((CounterValue { b: v.b + 1, ..v }, Increment::Inner))
        } else if v.c < r {
            Some((CounterValue { a: v.a, b: 0, c: v.c + 1 }, Increment::Middle))
        } else if v.a < r {
            Some((CounterValue { a: v.a + 1, b: 0, c: 0 }, Increment::Outer))
        } else {
            None
        }
    }
}

/// Loop variables: outer `a`, inner `b`, middle `c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CounterValue {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl fmt::Display for CounterValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}.{}", self.a, self.b, self.c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Increment {
    Inner,
    Middle,
    Outer,
}

impl Increment {
    pub fn name(self) -> &'static str {
        match self {
            Increment::Inner => "inner",
            Increment::Middle => "middle",
            Increment::Outer => "outer",
        }
    }
}

/// Which table row a monomer came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RowTag {
    pub increment: Increment,
    pub step: u8,
    pub sign: Sign,
}

/// A generated counter system with the row each monomer came from.
#[derive(Clone, Debug)]
pub struct Counter {
    pub spec: CounterSpec,
    pub system: InsertionSystem,
    pub rows: Vec<RowTag>,
}

impl Counter {
    pub fn generate(r: usize) -> Result<Counter, CounterError> {
        let spec = CounterSpec::new(r)?;
        let raw = table_monomers(&spec);
        let mut builder = SystemBuilder::new(spec.symbol_table());
        let mut rows = Vec::new();
        let unit = Concentration::fraction(1, 1);
        for (quad, tag) in raw {
            if builder.push(Monomer::new(quad, tag.sign, unit)) {
                rows.push(tag);
            }
        }
        let expected = predicted_monomer_count(r);
        if builder.len() != expected {
            return Err(CounterError::CountMismatch {
                expected,
                got: builder.len(),
            });
        }
        let conc = Concentration::uniform(builder.len());
        for m in builder.monomers_mut() {
            m.concentration = conc;
        }
        let s0 = spec.s(0);
        let system = builder.build(Initiator::new_unchecked([s0, s0], [s0, s0.complement()]));
        Ok(Counter { spec, system, rows })
    }

    /// The counter `system` was generated as, if any. Matches symbols,
    /// monomers, concentrations and initiator exactly.
    pub fn recognize(system: &InsertionSystem) -> Option<Counter> {
        let k = system.size();
        let r = (1..).take_while(|&r| predicted_monomer_count(r) <= k).last()?;
        if predicted_monomer_count(r) != k {
            return None;
        }
        let c = Counter::generate(r).ok()?;
        (c.system == *system).then_some(c)
    }

    /// The value encoded by the initiator site.
    pub fn start_value(&self) -> CounterValue {
        CounterValue { a: 0, b: 0, c: 0 }
    }

    /// The outer-step-1 positive monomer, inserted last into every
    /// finished counter site.
    pub fn completion_monomer(&self) -> crate::model::MonomerId {
        let r = self.spec.r;
        let key = [
            self.spec.s(r).complement(),
            self.spec.x(),
            self.spec.s(self.spec.f(5, r)),
            self.spec.s(r).complement(),
        ];
        self.system
            .monomers()
            .iter()
            .position(|m| m.quad == key && m.sign == Sign::Positive)
            .expect("generator emits the completion monomer") as u32
    }
}

/// Generates the counter system for loop bound `r`.
pub fn gen_counter(r: usize) -> Result<InsertionSystem, CounterError> {
    Ok(Counter::generate(r)?.system)
}

/// Every table row over its parameter ranges, before deduplication.
fn table_monomers(spec: &CounterSpec) -> Vec<([Symbol; 4], RowTag)> {
    let r = spec.r;
    let s = |n: usize| spec.s(n);
    let st = |n: usize| spec.s(n).complement();
    let f = |i: usize, v: usize| spec.f(i, v);
    let x = spec.x();
    let mut out = Vec::new();
    let mut push = |quad: [Symbol; 4], increment, step, sign| {
        out.push((quad, RowTag { increment, step, sign }))
    };
    use Increment::*;
    use Sign::{Negative as N, Positive as P};

    for b in 0..r {
        for a in 0..=r {
            for c in 0..=r {
                push([st(b), s(f(10, c)), s(f(10, b + 1)), st(c)], Inner, 1, P);
                push([s(f(11, c)), st(a), st(f(10, c)), x], Inner, 2, N);
                push([x, st(f(10, b + 1)), s(a), s(b + 1)], Inner, 2, N);
                push([st(b), x, s(f(13, b)), st(f(11, c))], Inner, 3, P);
                push([x, st(f(13, b)), s(a), s(f(12, b))], Inner, 3, N);
                push([st(f(12, b)), s(f(14, c)), x, st(f(11, c))], Inner, 4, P);
                push([s(c), st(a), st(f(14, c)), x], Inner, 4, N);
                push([st(f(12, b)), x, s(f(15, b + 1)), st(c)], Inner, 5, P);
                push([x, st(f(15, b + 1)), s(a), s(b + 1)], Inner, 5, N);
            }
        }
    }
    for c in 0..r {
        for a in 0..=r {
            push([st(r), s(f(2, c)), x, st(c)], Middle, 1, P);
            push([s(f(1, c)), st(a), st(f(2, c)), x], Middle, 1, N);
            push([st(r), x, s(f(3, c)), st(f(1, c))], Middle, 2, P);
            push([x, st(f(3, c)), s(a), s(0)], Middle, 2, N);
            push([st(0), s(f(4, c + 1)), x, st(f(1, c))], Middle, 3, P);
            push([s(c + 1), st(a), st(f(4, c + 1)), x], Middle, 3, N);
        }
    }
    for a in 0..r {
        push([st(r), x, s(f(5, r)), st(r)], Outer, 1, P);
        push([x, st(f(5, r)), s(a), st(f(6, a))], Outer, 1, N);
        push([s(f(6, a)), st(a + 1), x, st(r)], Outer, 2, P);
        push([x, st(a), s(a + 1), s(f(7, r))], Outer, 2, N);
        push([st(f(7, r)), x, s(f(8, r)), st(f(6, a))], Outer, 3, P);
        push([x, st(f(8, r)), s(a + 1), s(0)], Outer, 3, N);
        push([st(0), s(f(9, a)), x, st(f(6, a))], Outer, 4, P);
        push([s(0), st(a + 1), st(f(9, a)), x], Outer, 4, N);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate, Polymer};
    use rustc_hash::FxHashSet;

    #[test]
    fn counts_match_formula() {
        for (r, want) in [(1, 39), (2, 99), (3, 183), (4, 291)] {
            assert_eq!(predicted_monomer_count(r), want);
            assert_eq!(gen_counter(r).unwrap().size(), want);
        }
        assert_eq!(gen_counter(0), Err(CounterError::ZeroBound));
    }

    #[test]
    fn offset_bands_are_disjoint() {
        for r in 1..=6 {
            let spec = CounterSpec::new(r).unwrap();
            let mut seen = FxHashSet::default();
            for v in 0..=r {
                assert!(seen.insert(v));
            }
            for i in 1..=15 {
                for v in 0..=r {
                    assert!(seen.insert(spec.f(i, v)), "r={r} band {i} value {v}");
                }
            }
        }
    }

    #[test]
    fn x_complement_never_appears() {
        let c = Counter::generate(3).unwrap();
        let xs = c.spec.x().complement();
        assert!(c.system.monomers().iter().all(|m| !m.quad.contains(&xs)));
    }

    #[test]
    fn generated_systems_validate() {
        for r in 1..=3 {
            let sys = gen_counter(r).unwrap();
            assert!(validate(&sys).is_empty());
            assert_eq!(
                sys.render_site(&sys.initiator().site()),
                "(s0, s0)(s0, s0*)"
            );
        }
    }

    #[test]
    fn middle_site_admits_exactly_step_one() {
        let c = Counter::generate(2).unwrap();
        let spec = c.spec;
        for a in 0..=2 {
            for cc in 0..2 {
                let site = spec.value_site(CounterValue { a, b: 2, c: cc });
                let got = c.system.insertable(&site);
                assert_eq!(got.len(), 1);
                assert_eq!(
                    got[0].quad,
                    [spec.s(2).complement(), spec.s(spec.f(2, cc)), spec.x(), spec.s(cc).complement()]
                );
            }
        }
    }

    #[test]
    fn decode_round_trip() {
        let spec = CounterSpec::new(2).unwrap();
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    let v = CounterValue { a, b, c };
                    assert_eq!(spec.decode_site(&spec.value_site(v)), Some(v));
                }
            }
        }
        let not_value = Site::new([spec.s(0), spec.s(0)], [spec.s(spec.f(11, 0)), spec.s(0).complement()]);
        assert_eq!(spec.decode_site(&not_value), None);
    }

    #[test]
    fn successor_walks_all_values_in_order() {
        let spec = CounterSpec::new(2).unwrap();
        let mut v = CounterValue { a: 0, b: 0, c: 0 };
        let mut i = 0;
        while let Some((next, _)) = spec.successor(v) {
            assert_eq!(spec.value_index(v), i);
            v = next;
            i += 1;
        }
        assert_eq!(i, spec.value_count() - 1);
        assert_eq!(v, CounterValue { a: 2, b: 2, c: 2 });
    }

    #[test]
    fn first_insertion_from_initiator() {
        let c = Counter::generate(1).unwrap();
        let p = Polymer::initial(&c.system);
        let pairs = p.admissible_pairs(&c.system);
        assert_eq!(pairs.len(), 1);
        assert_eq!(c.rows[pairs[0].1 as usize].increment, Increment::Inner);
    }
}
