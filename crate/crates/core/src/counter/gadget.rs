//! Replay and exhaustive check of the counter's site-modification gadgets.
//!
//! A gadget starts from one site in a minimal harness polymer (the start
//! site's halves serve as the initiator). Every insertion order is
//! explored, with the gadget's expected end sites frozen so the run stops
//! where the gadget does. The check passes when every order is an
//! interleaving of the expected sequence, every order ends at the same
//! polymer, the end sites appear exactly, and every other site left
//! behind is unusable and carries an `x`.

use std::fmt;
use std::str::FromStr;

use rustc_hash::FxHashSet;

use super::{Counter, CounterError, CounterSpec};
use crate::model::{
    Concentration, Initiator, InsertionSystem, Monomer, MonomerId, Polymer, Sign, Site, Symbol,
    SymbolTable,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GadgetKind {
    /// One of the four single-symbol replacements, numbered 1..=4.
    Replacement(u8),
    Middle,
    Outer,
    /// Duplication: one site becomes the incremented site plus a site
    /// that phase two will turn into a second copy.
    InnerPhase1,
    InnerPhase2,
    /// Both phases together.
    Inner,
}

impl GadgetKind {
    pub const ALL: [GadgetKind; 9] = [
        GadgetKind::Replacement(1),
        GadgetKind::Replacement(2),
        GadgetKind::Replacement(3),
        GadgetKind::Replacement(4),
        GadgetKind::Middle,
        GadgetKind::Outer,
        GadgetKind::InnerPhase1,
        GadgetKind::InnerPhase2,
        GadgetKind::Inner,
    ];

    /// Parameter names, in the order they are given.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            GadgetKind::Replacement(_) => &["a", "b", "c", "d"],
            GadgetKind::Middle => &["a", "c"],
            GadgetKind::Outer => &["a"],
            GadgetKind::InnerPhase1 | GadgetKind::InnerPhase2 | GadgetKind::Inner => &["a", "b", "c"],
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GadgetKind::Replacement(k) => write!(f, "replacement{k}"),
            GadgetKind::Middle => f.write_str("middle"),
            GadgetKind::Outer => f.write_str("outer"),
            GadgetKind::InnerPhase1 => f.write_str("inner-phase1"),
            GadgetKind::InnerPhase2 => f.write_str("inner-phase2"),
            GadgetKind::Inner => f.write_str("inner"),
        }
    }
}

impl FromStr for GadgetKind {
    type Err = CounterError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GadgetKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| {
                let known: Vec<String> = GadgetKind::ALL.iter().map(|k| k.to_string()).collect();
                CounterError::Gadget(format!("unknown gadget kind {s:?} (one of {})", known.join(", ")))
            })
    }
}

/// One insertion of the canonical order.
#[derive(Clone, Debug)]
pub struct GadgetStep {
    pub gap: usize,
    pub monomer: MonomerId,
    /// Polymer after the insertion.
    pub after: Polymer,
}

#[derive(Clone, Debug)]
pub struct GadgetTrace {
    pub kind: GadgetKind,
    /// The system the gadget ran in: the counter system (or the two
    /// table monomers, for replacements) with the start site as initiator.
    pub harness: InsertionSystem,
    pub start: Site,
    pub steps: Vec<GadgetStep>,
    pub end_sites: Vec<Site>,
    pub byproducts: Vec<Site>,
    /// Distinct insertion orders explored.
    pub orders: usize,
}

impl GadgetTrace {
    pub fn final_polymer(&self) -> Polymer {
        self.steps
            .last()
            .map(|s| s.after.clone())
            .unwrap_or_else(|| Polymer::initial(&self.harness))
    }

    /// The canonical order, one polymer per line, `◊` at every usable or
    /// end site and the newly inserted monomer in bold.
    pub fn render_diamond(&self) -> String {
        let mut lines = vec![render_units(&self.harness, &Polymer::initial(&self.harness), None, &self.end_sites)];
        for step in &self.steps {
            lines.push(render_units(&self.harness, &step.after, Some(step.gap), &self.end_sites));
        }
        lines.join("\n")
    }
}

fn render_units(sys: &InsertionSystem, p: &Polymer, bold: Option<usize>, ends: &[Site]) -> String {
    let t = sys.symbols();
    let init = p.initiator();
    let mut out = format!("({}, {})", t.render(init.left[0]), t.render(init.left[1]));
    for gap in 0..p.gap_count() {
        let site = p.site_at(sys, gap).expect("gap in range");
        out.push_str(if sys.is_usable(&site) || ends.contains(&site) {
            " ◊ "
        } else {
            " "
        });
        if gap < p.chain().len() {
            let m = sys.monomer(p.chain()[gap]);
            let body = t.render_all(&m.quad).join(", ");
            if bold == Some(gap) {
                out.push_str(&format!("**({body})**"));
            } else {
                out.push_str(&format!("({body})"));
            }
        }
    }
    out.push_str(&format!("({}, {})", t.render(init.right[0]), t.render(init.right[1])));
    out
}

/// What a gadget is supposed to do: a fixed prefix, then independent
/// lanes whose insertions may interleave freely.
struct Expected {
    start: Site,
    prefix: Vec<([Symbol; 4], Sign)>,
    lanes: Vec<Vec<([Symbol; 4], Sign)>>,
    end_sites: Vec<Site>,
}

fn param(params: &[usize], kind: GadgetKind) -> Result<Vec<usize>, CounterError> {
    let names = kind.param_names();
    if params.len() != names.len() {
        return Err(CounterError::Gadget(format!(
            "{kind} takes {} parameters ({}), got {}",
            names.len(),
            names.join(","),
            params.len()
        )));
    }
    Ok(params.to_vec())
}

fn bad(msg: impl Into<String>) -> CounterError {
    CounterError::Gadget(msg.into())
}

fn counter_expected(spec: &CounterSpec, kind: GadgetKind, p: &[usize]) -> Result<Expected, CounterError> {
    let r = spec.r;
    let s = |n: usize| spec.s(n);
    let st = |n: usize| spec.s(n).complement();
    let f = |i: usize, v: usize| spec.f(i, v);
    let x = spec.x();
    let value = |a: usize, b: usize, c: usize| Site::new([s(a), s(b)], [s(c), st(a)]);
    use Sign::{Negative as N, Positive as P};
    Ok(match kind {
        GadgetKind::Middle => {
            let (a, c) = (p[0], p[1]);
            if a > r || c >= r {
                return Err(bad(format!("middle needs a <= {r} and c < {r}")));
            }
            Expected {
                start: value(a, r, c),
                prefix: vec![
                    ([st(r), s(f(2, c)), x, st(c)], P),
                    ([s(f(1, c)), st(a), st(f(2, c)), x], N),
                    ([st(r), x, s(f(3, c)), st(f(1, c))], P),
                    ([x, st(f(3, c)), s(a), s(0)], N),
                    ([st(0), s(f(4, c + 1)), x, st(f(1, c))], P),
                    ([s(c + 1), st(a), st(f(4, c + 1)), x], N),
                ],
                lanes: vec![],
                end_sites: vec![value(a, 0, c + 1)],
            }
        }
        GadgetKind::Outer => {
            let a = p[0];
            if a >= r {
                return Err(bad(format!("outer needs a < {r}")));
            }
            Expected {
                start: value(a, r, r),
                prefix: vec![
                    ([st(r), x, s(f(5, r)), st(r)], P),
                    ([x, st(f(5, r)), s(a), st(f(6, a))], N),
                    ([s(f(6, a)), st(a + 1), x, st(r)], P),
                    ([x, st(a), s(a + 1), s(f(7, r))], N),
                    ([st(f(7, r)), x, s(f(8, r)), st(f(6, a))], P),
                    ([x, st(f(8, r)), s(a + 1), s(0)], N),
                    ([st(0), s(f(9, a)), x, st(f(6, a))], P),
                    ([s(0), st(a + 1), st(f(9, a)), x], N),
                ],
                lanes: vec![],
                end_sites: vec![value(a + 1, 0, 0)],
            }
        }
        GadgetKind::InnerPhase1 | GadgetKind::InnerPhase2 | GadgetKind::Inner => {
            let (a, b, c) = (p[0], p[1], p[2]);
            if a > r || b >= r || c > r {
                return Err(bad(format!("inner needs a, c <= {r} and b < {r}")));
            }
            let split = ([st(b), s(f(10, c)), s(f(10, b + 1)), st(c)], P);
            let left_seal = ([s(f(11, c)), st(a), st(f(10, c)), x], N);
            let right_seal = ([x, st(f(10, b + 1)), s(a), s(b + 1)], N);
            let phase2 = vec![
                ([st(b), x, s(f(13, b)), st(f(11, c))], P),
                ([x, st(f(13, b)), s(a), s(f(12, b))], N),
                ([st(f(12, b)), s(f(14, c)), x, st(f(11, c))], P),
                ([s(c), st(a), st(f(14, c)), x], N),
                ([st(f(12, b)), x, s(f(15, b + 1)), st(c)], P),
                ([x, st(f(15, b + 1)), s(a), s(b + 1)], N),
            ];
            let copy = Site::new([s(a), s(b)], [s(f(11, c)), st(a)]);
            match kind {
                GadgetKind::InnerPhase1 => Expected {
                    start: value(a, b, c),
                    prefix: vec![split],
                    lanes: vec![vec![left_seal], vec![right_seal]],
                    end_sites: vec![copy, value(a, b + 1, c)],
                },
                GadgetKind::InnerPhase2 => Expected {
                    start: copy,
                    prefix: phase2,
                    lanes: vec![],
                    end_sites: vec![value(a, b + 1, c)],
                },
                _ => {
                    let mut left = vec![left_seal];
                    left.extend(phase2);
                    Expected {
                        start: value(a, b, c),
                        prefix: vec![split],
                        lanes: vec![left, vec![right_seal]],
                        end_sites: vec![value(a, b + 1, c), value(a, b + 1, c)],
                    }
                }
            }
        }
        GadgetKind::Replacement(_) => unreachable!("handled separately"),
    })
}

/// Harness for a lone replacement: symbols `s0..s_max`, a fresh `u`, and
/// `x`, with just the two table monomers.
fn replacement_harness(k: u8, p: &[usize]) -> Result<(InsertionSystem, Expected), CounterError> {
    let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
    let top = *p.iter().max().expect("four params");
    let mut table = SymbolTable::new();
    for n in 0..=top {
        table.intern(format!("s{n}"));
    }
    let u = table.intern("u");
    let x = table.intern("x");
    let s = |n: usize| Symbol::plain(n as u32);
    let st = |n: usize| Symbol::starred(n as u32);
    use Sign::{Negative as N, Positive as P};
    let (start, seq, end) = match k {
        1 => (
            Site::new([s(a), s(b)], [s(c), st(a)]),
            vec![([st(b), x, u, st(c)], P), ([x, u.complement(), s(a), s(d)], N)],
            Site::new([s(a), s(d)], [s(c), st(a)]),
        ),
        2 => (
            Site::new([s(a), s(b)], [s(c), st(a)]),
            vec![([st(b), u, x, st(c)], P), ([s(d), st(a), u.complement(), x], N)],
            Site::new([s(a), s(b)], [s(d), st(a)]),
        ),
        3 => (
            Site::new([s(b), s(a)], [st(a), s(c)]),
            vec![([x, st(b), st(c), u], N), ([u.complement(), x, s(d), s(a)], P)],
            Site::new([s(d), s(a)], [st(a), s(c)]),
        ),
        4 => (
            Site::new([s(b), s(a)], [st(a), s(c)]),
            vec![([u, st(b), st(c), x], N), ([st(a), s(d), x, u.complement()], P)],
            Site::new([s(b), s(a)], [st(a), s(d)]),
        ),
        _ => return Err(bad(format!("replacement kinds are 1..=4, got {k}"))),
    };
    if start == end {
        return Err(bad("replacement target equals the start site"));
    }
    let conc = Concentration::uniform(seq.len());
    let monomers = seq.iter().map(|&(q, sign)| Monomer::new(q, sign, conc)).collect();
    let init = Initiator::new(start.left, start.right).map_err(|e| bad(e.to_string()))?;
    let sys = InsertionSystem::new(table, monomers, init);
    Ok((
        sys,
        Expected {
            start,
            prefix: seq,
            lanes: vec![],
            end_sites: vec![end],
        },
    ))
}

const MAX_ORDERS: usize = 100_000;

/// Runs gadget `kind` with `params` for a counter of bound `r` (ignored
/// for replacements) and checks it against its expected behaviour.
pub fn verify_gadget(r: usize, kind: GadgetKind, params: &[usize]) -> Result<GadgetTrace, CounterError> {
    let p = param(params, kind)?;
    let (harness, expected) = match kind {
        GadgetKind::Replacement(k) => replacement_harness(k, &p)?,
        _ => {
            let counter = Counter::generate(r)?;
            let exp = counter_expected(&counter.spec, kind, &p)?;
            let init = Initiator::new(exp.start.left, exp.start.right).map_err(|e| bad(e.to_string()))?;
            (counter.system.with_initiator(init), exp)
        }
    };
    run_gadget(kind, harness, expected)
}

fn lookup(sys: &InsertionSystem, q: &([Symbol; 4], Sign)) -> Result<MonomerId, CounterError> {
    sys.monomers()
        .iter()
        .position(|m| m.quad == q.0 && m.sign == q.1)
        .map(|i| i as MonomerId)
        .ok_or_else(|| {
            let t = sys.symbols();
            bad(format!(
                "expected monomer ({}){} is not in the system",
                t.render_all(&q.0).join(", "),
                q.1.as_char()
            ))
        })
}

fn run_gadget(kind: GadgetKind, sys: InsertionSystem, exp: Expected) -> Result<GadgetTrace, CounterError> {
    let prefix: Vec<MonomerId> = exp.prefix.iter().map(|q| lookup(&sys, q)).collect::<Result<_, _>>()?;
    let lanes: Vec<Vec<MonomerId>> = exp
        .lanes
        .iter()
        .map(|l| l.iter().map(|q| lookup(&sys, q)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    let frozen = |site: &Site| exp.end_sites.contains(site);
    let render = |site: &Site| sys.render_site(site);

    // depth-first over every insertion order
    let mut orders: Vec<(Vec<(usize, MonomerId)>, Polymer)> = Vec::new();
    let mut stack = vec![(Polymer::initial(&sys), Vec::new())];
    while let Some((poly, path)) = stack.pop() {
        let mut moves = Vec::new();
        for s in poly.sites(&sys) {
            if frozen(&s.site) {
                continue;
            }
            let cands = sys.candidates(&s.site);
            if cands.len() > 1 {
                return Err(bad(format!("site {} admits {} monomers", render(&s.site), cands.len())));
            }
            if let Some(&m) = cands.first() {
                moves.push((s.gap, m));
            }
        }
        if moves.is_empty() {
            orders.push((path, poly));
            if orders.len() > MAX_ORDERS {
                return Err(bad("too many insertion orders"));
            }
            continue;
        }
        if path.len() > prefix.len() + lanes.iter().map(Vec::len).sum::<usize>() {
            return Err(bad(format!("gadget did not stop after {} insertions", path.len())));
        }
        for (gap, m) in moves {
            let next = poly.insert(&sys, gap, m).map_err(|e| bad(e.to_string()))?;
            let mut p2 = path.clone();
            p2.push((gap, m));
            stack.push((next, p2));
        }
    }

    let finals: FxHashSet<&Polymer> = orders.iter().map(|(_, p)| p).collect();
    if finals.len() != 1 {
        return Err(bad(format!("{} different end polymers", finals.len())));
    }
    for (path, _) in &orders {
        let ids: Vec<MonomerId> = path.iter().map(|&(_, m)| m).collect();
        if !is_interleaving(&ids, &prefix, &lanes) {
            let t: Vec<String> = ids.iter().map(|&m| sys.render_monomer(m)).collect();
            return Err(bad(format!("unexpected insertion order: {}", t.join(" "))));
        }
    }
    let want_orders = interleavings(&lanes);
    if orders.len() != want_orders {
        return Err(bad(format!("explored {} orders, expected {want_orders}", orders.len())));
    }

    let final_poly = orders[0].1.clone();
    let mut end_sites = Vec::new();
    let mut byproducts = Vec::new();
    let x_base = sys.symbols().get("x").expect("harness has x").base();
    for s in final_poly.sites(&sys) {
        if frozen(&s.site) {
            end_sites.push(s.site);
        } else {
            if sys.is_usable(&s.site) {
                return Err(bad(format!("byproduct site {} is usable", render(&s.site))));
            }
            let has_x = s.site.left.iter().chain(&s.site.right).any(|sym| sym.base() == x_base);
            if !has_x {
                return Err(bad(format!("byproduct site {} carries no x", render(&s.site))));
            }
            byproducts.push(s.site);
        }
    }
    let mut want = exp.end_sites.clone();
    let mut got = end_sites.clone();
    want.sort();
    got.sort();
    if want != got {
        let g: Vec<String> = got.iter().map(render).collect();
        return Err(bad(format!("end sites {} differ from expected", g.join(" "))));
    }

    // canonical order: prefix, then each lane in turn
    let canonical: Vec<MonomerId> = prefix.iter().chain(lanes.iter().flatten()).copied().collect();
    let (path, _) = orders
        .iter()
        .find(|(p, _)| p.iter().map(|&(_, m)| m).eq(canonical.iter().copied()))
        .expect("canonical order is one of the interleavings");
    let mut steps = Vec::new();
    let mut poly = Polymer::initial(&sys);
    for &(gap, m) in path {
        poly = poly.insert(&sys, gap, m).expect("replaying an explored order");
        steps.push(GadgetStep {
            gap,
            monomer: m,
            after: poly.clone(),
        });
    }
    Ok(GadgetTrace {
        kind,
        harness: sys,
        start: exp.start,
        steps,
        end_sites,
        byproducts,
        orders: orders.len(),
    })
}

fn is_interleaving(ids: &[MonomerId], prefix: &[MonomerId], lanes: &[Vec<MonomerId>]) -> bool {
    if ids.len() != prefix.len() + lanes.iter().map(Vec::len).sum::<usize>() || !ids.starts_with(prefix) {
        return false;
    }
    let mut cursor = vec![0usize; lanes.len()];
    'next: for &m in &ids[prefix.len()..] {
        for (lane, c) in lanes.iter().zip(cursor.iter_mut()) {
            if lane.get(*c) == Some(&m) {
                *c += 1;
                continue 'next;
            }
        }
        return false;
    }
    true
}

/// Multinomial count of lane interleavings.
fn interleavings(lanes: &[Vec<MonomerId>]) -> usize {
    let mut total = 0usize;
    let mut count = 1usize;
    for lane in lanes {
        for i in 1..=lane.len() {
            total += 1;
            count = count * total / i;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn middle_increment_matches_table_order() {
        let t = verify_gadget(2, GadgetKind::Middle, &[1, 0]).unwrap();
        assert_eq!(t.steps.len(), 6);
        assert_eq!(t.orders, 1);
        assert_eq!(t.harness.render_site(&t.end_sites[0]), "(s1, s0)(s1, s1*)");
        let text = t.render_diamond();
        assert!(text.lines().next().unwrap().contains("(s1, s2) ◊ (s0, s1*)"));
    }

    #[test]
    fn outer_increment_ends_at_next_outer_value() {
        let t = verify_gadget(2, GadgetKind::Outer, &[0]).unwrap();
        assert_eq!(t.steps.len(), 8);
        assert_eq!(t.harness.render_site(&t.end_sites[0]), "(s1, s0)(s0, s1*)");
    }

    #[test]
    fn duplication_tolerates_both_orders() {
        let t = verify_gadget(1, GadgetKind::InnerPhase1, &[0, 0, 1]).unwrap();
        assert_eq!(t.orders, 2);
        assert_eq!(t.end_sites.len(), 2);
        let full = verify_gadget(2, GadgetKind::Inner, &[1, 0, 2]).unwrap();
        assert_eq!(full.orders, 8);
        assert_eq!(full.end_sites[0], full.end_sites[1]);
        assert_eq!(full.steps.len(), 9);
    }

    #[test]
    fn replacements() {
        for k in 1..=4 {
            let t = verify_gadget(1, GadgetKind::Replacement(k), &[0, 1, 2, 3]).unwrap();
            assert_eq!(t.steps.len(), 2);
            assert_eq!(t.byproducts.len(), 2);
        }
    }

    #[test]
    fn out_of_range_params_rejected() {
        assert!(verify_gadget(2, GadgetKind::Middle, &[0, 2]).is_err());
        assert!(verify_gadget(2, GadgetKind::Outer, &[2]).is_err());
        assert!(verify_gadget(2, GadgetKind::Middle, &[0]).is_err());
        assert!(verify_gadget(1, GadgetKind::Replacement(1), &[0, 1, 2, 1]).is_err());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in GadgetKind::ALL {
            assert_eq!(k.to_string().parse::<GadgetKind>().unwrap(), k);
        }
    }
}
