//! Does a system build exactly one terminal polymer?
//!
//! The exhaustive check works on site types rather than polymers. Every
//! gap evolves independently of the rest of the polymer, so when each
//! reachable site type admits at most one monomer and the site-type graph
//! is acyclic, every gap fills in exactly one way: the terminal polymer is
//! unique and every other reachable polymer is a proper, non-terminal part
//! of it. A cycle means unbounded growth. Branching sites do not settle the
//! question by themselves (two orders can meet again), so those systems
//! fall back to enumerating polymers.

use num_bigint::BigUint;

use super::reachable::reachable;
use super::Verdict;
use crate::kinetics::trials::{run_observed, trials_observed, TrialRow, TrialStats};
use crate::kinetics::{Caps, Engine, MultiCandidate, Options, Termination};
use crate::model::{InsertionSystem, MonomerId, Polymer, Site, SiteGraph};

/// Site-type closures larger than this are reported inconclusive.
pub const SITE_GRAPH_CAP: usize = 1 << 22;
/// Polymer enumeration cap used when falling back from the site graph.
pub const ENUMERATION_CAP: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    /// A reachable site admitting several monomer types.
    MultiCandidate {
        site: Site,
        candidates: Vec<MonomerId>,
    },
    /// Two distinct terminal polymers.
    SecondTerminal { first: Polymer, second: Polymer },
    /// A polymer longer than the terminal one, given by its length.
    OverLength { terminal_length: usize, length: usize },
    /// A site type that can regenerate itself, so growth never stops.
    Cycle { sites: Vec<Site> },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Evidence {
    pub method: &'static str,
    pub site_types: usize,
    pub polymers: usize,
    pub trials: usize,
    pub completed_trials: usize,
    pub steps_audited: u64,
    pub sites_audited: u64,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminismVerdict {
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    /// The unique terminal polymer, when small enough to hold.
    pub target: Option<Polymer>,
    pub target_length: Option<BigUint>,
    pub evidence: Evidence,
    /// Site witness seen on the way to a verdict reached by other means.
    pub branching_site: Option<Witness>,
}

impl DeterminismVerdict {
    fn new(verdict: Verdict, evidence: Evidence) -> Self {
        DeterminismVerdict {
            verdict,
            witness: None,
            target: None,
            target_length: None,
            evidence,
            branching_site: None,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Exhaustive verdict. `max_length` bounds the target polymer that gets
/// materialized and, on the fallback path, the polymers enumerated.
pub fn verify_deterministic_exhaustive(system: &InsertionSystem, max_length: usize) -> DeterminismVerdict {
    let graph = SiteGraph::build(system, SITE_GRAPH_CAP);
    let mut evidence = Evidence {
        method: "site-graph",
        site_types: graph.len(),
        ..Evidence::default()
    };
    if graph.is_truncated() {
        evidence.note = Some(format!("site-type closure exceeds {SITE_GRAPH_CAP} nodes"));
        return DeterminismVerdict::new(Verdict::Inconclusive, evidence);
    }
    if let Some(node) = graph.first_branching() {
        let site = graph.site(node);
        let w = Witness::MultiCandidate {
            site,
            candidates: system.candidates(&site).to_vec(),
        };
        let mut v = verify_deterministic_enumerated(system, max_length, ENUMERATION_CAP);
        v.evidence.site_types = graph.len();
        v.branching_site = Some(w);
        return v;
    }
    if let Some(cycle) = graph.find_cycle() {
        let mut v = DeterminismVerdict::new(Verdict::Fail, evidence);
        v.witness = Some(Witness::Cycle {
            sites: cycle.into_iter().map(|n| graph.site(n)).collect(),
        });
        return v;
    }
    let fill = graph.fill_sizes();
    let length = &fill[graph.root()] + 2u32;
    let mut v = DeterminismVerdict::new(Verdict::Pass, evidence);
    if length <= BigUint::from(max_length) {
        v.target = graph
            .unique_chain(max_length)
            .map(|chain| Polymer::from_chain(system, chain));
    }
    v.target_length = Some(length);
    v
}

/// Exhaustive verdict by enumerating polymers up to `max_length`.
pub fn verify_deterministic_enumerated(
    system: &InsertionSystem,
    max_length: usize,
    max_count: usize,
) -> DeterminismVerdict {
    let set = reachable(system, max_length, max_count);
    let evidence = Evidence {
        method: "enumeration",
        polymers: set.len(),
        ..Evidence::default()
    };
    let terms = set.terminal(system);
    if terms.len() >= 2 {
        let mut v = DeterminismVerdict::new(Verdict::Fail, evidence);
        v.witness = Some(Witness::SecondTerminal {
            first: set.polymers()[terms[0]].clone(),
            second: set.polymers()[terms[1]].clone(),
        });
        return v;
    }
    if set.truncated || terms.is_empty() {
        let mut v = DeterminismVerdict::new(Verdict::Inconclusive, evidence);
        v.evidence.note = Some(if set.truncated {
            format!("more than {max_count} reachable polymers")
        } else {
            format!("no terminal polymer of length at most {max_length}")
        });
        return v;
    }
    let target = set.polymers()[terms[0]].clone();
    if set.over_length.is_some() {
        // something of length max_length + 1 >= |target| + 1 is reachable
        let mut v = DeterminismVerdict::new(Verdict::Fail, evidence);
        v.witness = Some(Witness::OverLength {
            terminal_length: target.len(),
            length: max_length + 1,
        });
        return v;
    }
    // every other member is non-terminal; with the closure finite, each
    // can only grow towards the target
    let mut v = DeterminismVerdict::new(Verdict::Pass, evidence);
    v.target_length = Some(BigUint::from(target.len()));
    v.target = Some(target);
    v
}

/// Stochastic verdict: runs every seed with per-site auditing.
pub fn verify_deterministic_stochastic(system: &InsertionSystem, seeds: &[u64], caps: Caps) -> DeterminismVerdict {
    verify_deterministic_stochastic_observed(system, seeds, caps, |_, _| ()).0
}

/// As [`verify_deterministic_stochastic`], also handing each finished
/// engine to `observe` and returning the trial statistics.
///
/// The lowest seed runs first and provides the reference polymer; the rest
/// run in parallel and are compared against it unit by unit.
pub fn verify_deterministic_stochastic_observed<T: Send>(
    system: &InsertionSystem,
    seeds: &[u64],
    caps: Caps,
    observe: impl Fn(&Engine<'_>, Termination) -> T + Sync,
) -> (DeterminismVerdict, Option<TrialStats>, Vec<T>) {
    let mut seeds = seeds.to_vec();
    seeds.sort_unstable();
    seeds.dedup();
    let mut evidence = Evidence {
        method: "stochastic-audit",
        trials: seeds.len(),
        ..Evidence::default()
    };
    if seeds.is_empty() {
        evidence.note = Some("no trials".into());
        return (DeterminismVerdict::new(Verdict::Inconclusive, evidence), None, Vec::new());
    }
    let options = Options {
        record_times: true,
        audit: true,
    };
    struct Outcome<T> {
        multi: Option<MultiCandidate>,
        usable: u64,
        chain: Option<Vec<MonomerId>>,
        same: Option<bool>,
        extra: T,
    }
    let first_seed = seeds[0];
    let (first_row, first) = run_observed(system, first_seed, caps, options, |e, t| Outcome {
        multi: e.audit().first_multi.clone(),
        usable: e.audit().usable_sites,
        chain: (t == Termination::Terminal).then(|| e.chain()),
        same: None,
        extra: observe(e, t),
    });
    let reference = first.chain.clone();
    let (rest_stats, rest) = trials_observed(system, &seeds[1..], caps, options, |e, t| {
        let multi = e.audit().first_multi.clone();
        let same = match (&reference, t) {
            (Some(r), Termination::Terminal) => Some(e.chain() == *r),
            _ => None,
        };
        Outcome {
            multi,
            usable: e.audit().usable_sites,
            chain: None,
            same,
            extra: observe(e, t),
        }
    });
    let mut rows: Vec<TrialRow> = vec![first_row];
    rows.extend(rest_stats.rows.iter().copied());
    let stats = TrialStats::from_rows(rows);

    let mut outcomes = vec![first];
    outcomes.extend(rest);
    evidence.steps_audited = stats.rows.iter().map(|r| r.steps).sum();
    evidence.sites_audited = outcomes.iter().map(|o| o.usable).sum();
    evidence.completed_trials = stats.rows.len() - stats.non_terminal.len();

    let multi = outcomes.iter().find_map(|o| o.multi.clone());
    let mismatch = outcomes.iter().position(|o| o.same == Some(false));
    let verdict = if let Some(m) = multi {
        let mut v = DeterminismVerdict::new(Verdict::Fail, evidence);
        v.witness = Some(Witness::MultiCandidate {
            site: m.site,
            candidates: m.candidates,
        });
        v
    } else if let Some(i) = mismatch {
        let second_seed = stats.rows[i].seed;
        let mut e = Engine::new(system, second_seed, Options::default());
        e.run(caps);
        let first = Polymer::from_chain(system, reference.clone().unwrap_or_default());
        let mut v = DeterminismVerdict::new(Verdict::Fail, evidence);
        v.witness = Some(Witness::SecondTerminal {
            first,
            second: e.polymer(),
        });
        v
    } else if !stats.all_terminal() {
        let mut v = DeterminismVerdict::new(Verdict::Inconclusive, evidence);
        v.evidence.note = Some(format!(
            "{} of {} trials stopped at a cap before finishing",
            stats.non_terminal.len(),
            stats.rows.len()
        ));
        v
    } else {
        let target = Polymer::from_chain(system, reference.clone().expect("first trial finished"));
        let mut v = DeterminismVerdict::new(Verdict::Pass, evidence);
        v.target_length = Some(BigUint::from(target.len()));
        v.target = Some(target);
        v
    };
    let extras = outcomes.into_iter().map(|o| o.extra).collect();
    (verdict, Some(stats), extras)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counter::Counter;
    use crate::grammars::{compile, Grammar};
    use crate::model::{Concentration, Initiator, Monomer, SymbolTable};

    /// Initiator (a, b)(c, a*) admitting two different monomers.
    fn fork() -> InsertionSystem {
        let mut t = SymbolTable::new();
        let [a, b, c, x, y] = ["a", "b", "c", "x", "y"].map(|n| t.intern(n));
        let half = Concentration::fraction(1, 2);
        let m1 = Monomer::positive([b.complement(), x, x, c.complement()], half.clone());
        let m2 = Monomer::positive([b.complement(), y, y, c.complement()], half);
        InsertionSystem::new(t, vec![m1, m2], Initiator::new_unchecked([a, b], [c, a.complement()]))
    }

    #[test]
    fn counter_r1_is_deterministic() {
        let c = Counter::generate(1).unwrap();
        let v = verify_deterministic_exhaustive(&c.system, 245);
        assert_eq!(v.verdict, Verdict::Pass);
        assert_eq!(v.target.as_ref().unwrap().len(), 245);
        assert!(v.target.as_ref().unwrap().is_terminal(&c.system));
        assert_eq!(v.target_length, Some(BigUint::from(245u32)));
    }

    #[test]
    fn forked_initiator_is_not_deterministic() {
        let sys = fork();
        let v = verify_deterministic_exhaustive(&sys, 10);
        assert_eq!(v.verdict, Verdict::Fail);
        assert!(matches!(v.witness, Some(Witness::SecondTerminal { .. })));
        assert!(matches!(v.branching_site, Some(Witness::MultiCandidate { ref candidates, .. }) if candidates.len() == 2));
        let s = verify_deterministic_stochastic(&sys, &[1, 2, 3], Caps::none());
        assert_eq!(s.verdict, Verdict::Fail);
        assert!(matches!(s.witness, Some(Witness::MultiCandidate { .. })));
    }

    #[test]
    fn empty_system_is_deterministic() {
        // the initiator has no admissible insertion, so it is the terminal polymer
        let sys = InsertionSystem::new(fork().symbols().clone(), vec![], fork().initiator());
        let v = verify_deterministic_exhaustive(&sys, 10);
        assert_eq!(v.verdict, Verdict::Pass);
        assert_eq!(v.target.unwrap().len(), 2);
        let e = verify_deterministic_enumerated(&sys, 10, 10);
        assert_eq!(e.verdict, Verdict::Pass);
    }

    #[test]
    fn zero_trials_is_inconclusive() {
        let c = Counter::generate(1).unwrap();
        let v = verify_deterministic_stochastic(&c.system, &[], Caps::none());
        assert_eq!(v.verdict, Verdict::Inconclusive);
        let capped = verify_deterministic_stochastic(&c.system, &[1, 2], Caps::steps(50));
        assert_eq!(capped.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn stochastic_matches_exhaustive_on_r1() {
        let c = Counter::generate(1).unwrap();
        let s = verify_deterministic_stochastic(&c.system, &(0..30).collect::<Vec<_>>(), Caps::none());
        assert_eq!(s.verdict, Verdict::Pass);
        assert_eq!(s.evidence.completed_trials, 30);
        assert_eq!(s.evidence.steps_audited, 30 * 243);
        let e = verify_deterministic_exhaustive(&c.system, 245);
        assert_eq!(s.target, e.target);
    }

    #[test]
    fn ambiguous_compiled_grammar_branches() {
        // two rules for the same nonterminal pair put two monomers on one site
        let g = Grammar::from_named(
            "S",
            &[
                ("S", vec!["A", "B"]),
                ("S", vec!["S", "S"]),
                ("A", vec!["a"]),
                ("B", vec!["b"]),
            ],
        )
        .unwrap();
        let c = compile(&g).unwrap();
        let s = verify_deterministic_stochastic(&c.system, &[0, 1, 2, 3], Caps::steps(500));
        assert_eq!(s.verdict, Verdict::Fail);
        assert!(matches!(s.witness, Some(Witness::MultiCandidate { .. })));
        let e = verify_deterministic_enumerated(&c.system, 11, 100_000);
        assert_eq!(e.verdict, Verdict::Fail);
    }

    #[test]
    fn enumeration_agrees_with_site_graph_on_ab() {
        let g = Grammar::from_named(
            "S",
            &[("S", vec!["A", "B"]), ("A", vec!["a"]), ("B", vec!["b"])],
        )
        .unwrap();
        let c = compile(&g).unwrap();
        let a = verify_deterministic_exhaustive(&c.system, 7);
        let b = verify_deterministic_enumerated(&c.system, 7, 10_000);
        assert_eq!(a.verdict, Verdict::Pass);
        assert_eq!(b.verdict, Verdict::Pass);
        assert_eq!(a.target, b.target);
    }
}
