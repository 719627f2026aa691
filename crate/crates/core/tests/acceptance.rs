//! Acceptance run: one line per criterion, then a nonzero exit if any gating
//! criterion failed. Expected values come from closed forms, brute-force
//! oracles written here, or exact computations on the site closure.
//!
//!     cargo test --release --test acceptance -- --nocapture

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use insertion::counter::gadget::{verify_gadget, GadgetKind};
use insertion::counter::recurrence::{exact_sizes, log2, verify_length_recurrence};
use insertion::counter::{Counter, CounterSpec};
use insertion::explorer::{
    audit_insertion_patterns, usable_sites, verify_deterministic_exhaustive,
    verify_deterministic_stochastic, verify_deterministic_stochastic_observed, verify_expression, DeterminismVerdict,
    ExpressionMap, Verdict,
};
use insertion::format::{emit_grammar, emit_system, parse_grammar, parse_system};
use insertion::grammars::{compile, cyk, to_cnf, Compiled, Grammar, Word};
use insertion::kinetics::{
    run, seed_range, trials, Caps, CompletionLaw, Engine, LawOptions, Options, Termination, TrialStats,
};
use insertion::model::{InsertionSystem, MonomerId, Polymer, Sign};

/// Trials per r for the stochastic criteria.
const TRIALS: usize = 60;
/// Steps allowed per r = 3 run before it counts as capped.
const R3_STEP_CAP: u64 = 1 << 20;
/// Waiting-time mean tolerance, relative.
const MEAN_TOLERANCE: f64 = 0.05;
/// Selection frequency tolerance, in binomial standard deviations.
const SIGMA_TOLERANCE: f64 = 3.0;
/// Allowed tail mass beyond three times the mean.
const TAIL_LIMIT: f64 = 0.05;
/// Simulation and exact law must agree within this many standard errors.
const LAW_AGREEMENT: f64 = 4.0;

/// Terminal lengths first verified for r = 1, 2; kept as regression values.
const GOLDEN_LENGTHS: [(usize, u64); 2] = [(1, 245), (2, 3_154_033)];

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_insertion"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
    )
}

struct Outcome {
    pass: bool,
    detail: String,
    /// A failure here is reported but does not fail the run: the check is
    /// out of reach at desk scale and is documented as such.
    gating: bool,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
        gating: true,
    }
}

// Fixture grammars with the longest word compared for each.
const GRAMMARS: [(&str, usize); 3] = [("ab", 2), ("anbn", 6), ("random3", 3)];

fn fixture_grammar(name: &str) -> Grammar {
    parse_grammar(&read_fixture(&format!("{name}.grammar"))).unwrap()
}

fn compiled_fixtures() -> Vec<(&'static str, Compiled)> {
    GRAMMARS
        .iter()
        .map(|&(name, _)| (name, compile(&fixture_grammar(name)).unwrap()))
        .collect()
}

/// Every word over `alphabet` up to `max_len` letters.
fn all_words(alphabet: &[String], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Word> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for a in alphabet {
                let mut v = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn criterion_1() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, max_n) in GRAMMARS {
        let g = fixture_grammar(name);
        let cnf = to_cnf(&g).unwrap();
        // brute force: every word the CYK table accepts
        let mut expected: BTreeSet<Word> = all_words(cnf.terminals(), max_n)
            .into_iter()
            .filter(|w| cyk(&cnf, w).unwrap())
            .collect();
        if name == "anbn" {
            let closed: BTreeSet<Word> = (1..=max_n / 2)
                .map(|n| [vec!["a".to_string(); n], vec!["b".to_string(); n]].concat())
                .collect();
            ok &= closed == expected;
            expected = closed;
        }
        let c = compile(&g).unwrap();
        let v = verify_expression(&c.system, &cnf, &ExpressionMap::for_compiled(&c), max_n, 2_000_000).unwrap();
        let lengths_ok = v
            .report
            .images
            .iter()
            .all(|i| i.string_length == 16 * i.word.len() - 8);
        let pass = v.verdict == Verdict::Pass && v.produced == expected && lengths_ok && v.report.max_run < 16;

        // the same pipeline through the command line
        let dir = tempfile::tempdir().unwrap();
        let sys = dir.path().join("out.sys");
        let grammar = fixture(&format!("{name}.grammar"));
        let (c1, _) = cli(&["compile", "--grammar", grammar.to_str().unwrap(), "--out", sys.to_str().unwrap()]);
        let (c2, _) = cli(&[
            "verify",
            "--system",
            sys.to_str().unwrap(),
            "--mode",
            "expression",
            "--grammar",
            grammar.to_str().unwrap(),
            "--max-n",
            &max_n.to_string(),
        ]);
        ok &= pass && c1 == 0 && c2 == 0;
        notes.push(format!(
            "{name}: {} words, max eps-run {}, cli {c1}/{c2}",
            expected.len(),
            v.report.max_run
        ));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, c) in compiled_fixtures() {
        let audit = audit_insertion_patterns(&c, 12, 5_000_000);
        ok &= audit.passed();
        notes.push(format!(
            "{name}: {} insertions over {} polymers, {} violations{}",
            audit.insertions,
            audit.polymers,
            audit.violations.len(),
            if audit.truncated { ", truncated" } else { "" }
        ));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_3() -> Outcome {
    let mut ok = true;
    let mut counts = Vec::new();
    for (r, want) in [(1, 39), (2, 99), (3, 183), (4, 291)] {
        let c = Counter::generate(r).unwrap();
        let sys = &c.system;
        ok &= sys.size() == want && sys.size() == 12 * r * r + 24 * r + 3;
        let mut pos = BTreeSet::new();
        let mut neg = BTreeSet::new();
        for m in sys.monomers() {
            let fresh = match m.sign {
                Sign::Positive => pos.insert((m.quad[0], m.quad[3])),
                Sign::Negative => neg.insert((m.quad[1], m.quad[2])),
            };
            ok &= fresh;
        }
        counts.push(sys.size().to_string());
    }
    outcome(ok, format!("monomer counts {}", counts.join(", ")))
}

/// Per run: `P_i` for every counter value seen, any value whose sites
/// disagreed, and the terminal length.
struct Instrumented {
    sizes: BTreeMap<usize, u64>,
    inconsistent: Vec<usize>,
    length: u64,
}

fn instrument(spec: CounterSpec) -> impl Fn(&Engine<'_>, Termination) -> Instrumented + Sync {
    move |e, _| {
        let fill = e.fill_sizes();
        let mut sizes = BTreeMap::new();
        let mut inconsistent = Vec::new();
        for id in 0..e.site_count() {
            if let Some(v) = spec.decode_site(&e.site(id as u32)) {
                let i = spec.value_index(v);
                if let Some(old) = sizes.insert(i, fill[id]) {
                    if old != fill[id] {
                        inconsistent.push(i);
                    }
                }
            }
        }
        Instrumented {
            sizes,
            inconsistent,
            length: e.events().len() as u64 + 2,
        }
    }
}

struct AuditedRuns {
    verdict: DeterminismVerdict,
    stats: TrialStats,
    observed: Vec<Instrumented>,
}

fn audited(r: usize) -> &'static AuditedRuns {
    static R1: OnceLock<AuditedRuns> = OnceLock::new();
    static R2: OnceLock<AuditedRuns> = OnceLock::new();
    let cell = match r {
        1 => &R1,
        2 => &R2,
        _ => unreachable!(),
    };
    cell.get_or_init(|| {
        let c = Counter::generate(r).unwrap();
        let (verdict, stats, observed) = verify_deterministic_stochastic_observed(
            &c.system,
            &seed_range(1000 * r as u64, TRIALS),
            Caps::none(),
            instrument(c.spec),
        );
        AuditedRuns {
            verdict,
            stats: stats.expect("trials ran"),
            observed,
        }
    })
}

fn criterion_4() -> Outcome {
    let c1 = Counter::generate(1).unwrap();
    let ex = verify_deterministic_exhaustive(&c1.system, 1 << 20);
    let r2 = audited(2);
    let hard = (
        ex.verdict == Verdict::Pass && r2.verdict.verdict == Verdict::Pass && r2.verdict.evidence.completed_trials >= 50,
        format!(
            "r=1 exhaustive {} ({}), r=2 stochastic {} over {} trials, {} sites audited",
            ex.verdict,
            ex.evidence.method,
            r2.verdict.verdict,
            r2.verdict.evidence.completed_trials,
            r2.verdict.evidence.sites_audited
        ),
    );

    // r = 3: a run has about 3e15 insertions, so every trial stops at the cap
    let c3 = Counter::generate(3).unwrap();
    let v3 = verify_deterministic_stochastic(&c3.system, &seed_range(3000, 50), Caps::steps(R3_STEP_CAP));
    let closure = verify_deterministic_exhaustive(&c3.system, 0);
    let r3 = (
        v3.verdict == Verdict::Pass,
        format!(
            "r=3 stochastic {} ({} of {} trials finished within {} steps, {} sites audited, none multi-candidate: {}); \
             site closure {} with terminal length {}",
            v3.verdict,
            v3.evidence.completed_trials,
            v3.evidence.trials,
            R3_STEP_CAP,
            v3.evidence.sites_audited,
            v3.witness.is_none(),
            closure.verdict,
            closure.target_length.map_or("?".into(), |l| l.to_string()),
        ),
    );
    // only the r <= 2 part can gate; the r = 3 part is reported as it is
    Outcome {
        pass: hard.0 && r3.0,
        detail: format!("{}; {}", hard.1, r3.1),
        gating: !hard.0,
    }
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (r, golden) in GOLDEN_LENGTHS {
        let runs = audited(r);
        let counter = Counter::generate(r).unwrap();
        let (exact, exact_len) = exact_sizes(&counter).unwrap();
        let mut checks = 0;
        for obs in &runs.observed {
            let sizes: BTreeMap<usize, BigUint> = obs.sizes.iter().map(|(&i, &p)| (i, BigUint::from(p))).collect();
            let len = BigUint::from(obs.length);
            let report = verify_length_recurrence(r, &sizes, &len);
            checks += report.checks;
            ok &= report.passed() && obs.inconsistent.is_empty();
            ok &= obs.length == golden && len == exact_len;
            ok &= sizes.iter().all(|(i, p)| exact.get(i) == Some(p));
        }
        let values = runs.observed.first().map_or(0, |o| o.sizes.len());
        notes.push(format!(
            "r={r}: {} runs, {values} values observed, {checks} bound checks, length {golden}",
            runs.observed.len()
        ));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_6() -> Outcome {
    let mut systems: Vec<(String, InsertionSystem)> = compiled_fixtures()
        .into_iter()
        .map(|(n, c)| (n.to_string(), c.system))
        .collect();
    for r in 1..=4 {
        systems.push((format!("counter r={r}"), Counter::generate(r).unwrap().system));
    }
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, sys) in &systems {
        let census = usable_sites(sys);
        let k = census.k as f64;
        let bound = 4.0 * k.powf(1.5);
        let within = census.within_bound();
        ok &= within && (census.usable.len() as f64) <= bound;
        let mut note = format!("{name}: {}/{bound:.0}", census.usable.len());
        let v = verify_deterministic_exhaustive(sys, 0);
        if let (Verdict::Pass, Some(len)) = (v.verdict, &v.target_length) {
            let holds = census.length_within_bound(len);
            ok &= holds && log2(len) <= bound;
            note.push_str(&format!(" log2 len {:.1}", log2(len)));
        }
        notes.push(note);
    }
    outcome(ok, notes.join("; "))
}

const ONE_CLOCK: &str = "initiator (a b) (c a*)\nmonomer (b* x y c*) + 2/5\n";
const TWO_CLOCKS: &str = "initiator (a b) (c a*)\nmonomer (b* x y c*) + 1/4\nmonomer (b* z w c*) + 3/4\n";

fn first_events(sys: &InsertionSystem, samples: usize) -> Vec<(f64, MonomerId)> {
    seed_range(7, samples)
        .into_iter()
        .map(|seed| {
            let mut e = Engine::new(sys, seed, Options::default());
            e.step(None).expect("one site is open");
            (e.time(), e.events()[0].monomer)
        })
        .collect()
}

fn criterion_7() -> Outcome {
    let n = 10_000;
    let one = parse_system(ONE_CLOCK).unwrap();
    let waits = first_events(&one, n);
    let mean = waits.iter().map(|w| w.0).sum::<f64>() / n as f64;
    let expected = 1.0 / 0.4;
    let rel = (mean - expected).abs() / expected;

    let two = parse_system(TWO_CLOCKS).unwrap();
    let picks = first_events(&two, n);
    let p = 0.25;
    let hits = picks.iter().filter(|e| e.1 == 0).count() as f64;
    let sigma = (n as f64 * p * (1.0 - p)).sqrt();
    let z = (hits - n as f64 * p).abs() / sigma;
    let two_mean = picks.iter().map(|w| w.0).sum::<f64>() / n as f64;
    let two_rel = (two_mean - 1.0).abs();

    outcome(
        rel <= MEAN_TOLERANCE && z <= SIGMA_TOLERANCE && two_rel <= MEAN_TOLERANCE,
        format!(
            "one clock mean {mean:.4} vs {expected} ({:.2}%); two clocks: first monomer {hits} of {n} ({z:.2} sigma), \
             mean wait {two_mean:.4} vs 1",
            100.0 * rel
        ),
    )
}

fn criterion_8() -> Outcome {
    let c1 = Counter::generate(1).unwrap();
    let s1 = trials(&c1.system, &seed_range(100, 200), Caps::none());
    let s2 = &audited(2).stats;
    let mut ok = s1.all_terminal() && s2.all_terminal();

    let laws: Vec<CompletionLaw> = (1..=3)
        .map(|r| CompletionLaw::compute(&Counter::generate(r).unwrap().system, LawOptions::default()).unwrap())
        .collect();
    // the exact law must describe the simulator where both are available
    for (stats, law) in [(&s1, &laws[0]), (s2, &laws[1])] {
        ok &= (stats.mean - law.mean()).abs() <= LAW_AGREEMENT * stats.std_error();
    }
    // r = 3 runs are out of reach; draw completion times from its exact law
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let draws: Vec<f64> = (0..TRIALS).map(|_| laws[2].sample(&mut rng)).collect();
    let m3 = draws.iter().sum::<f64>() / draws.len() as f64;

    let means = [s1.mean, s2.mean, m3];
    ok &= means[0] < means[1] && means[1] < means[2];
    let tail = s2.tail_fraction(3.0);
    ok &= tail < TAIL_LIMIT;
    outcome(
        ok,
        format!(
            "means {:.0} < {:.0} < {:.0} (r=3 from {} draws of the exact law, mean {:.0}); \
             r=2 fraction beyond 3x mean {tail} (exact {:.1e})",
            means[0],
            means[1],
            means[2],
            draws.len(),
            laws[2].mean(),
            laws[1].survival(3.0 * laws[1].mean())
        ),
    )
}

fn s(n: usize) -> String {
    format!("s{n}")
}

fn st(n: usize) -> String {
    format!("s{n}*")
}

fn mono(q: [&str; 4], sign: char) -> String {
    format!("({}, {}, {}, {}){sign}", q[0], q[1], q[2], q[3])
}

/// The increment sequences as written out by hand from the construction:
/// inserted monomers in order, the end sites, and the monomer allowed to
/// commute with its neighbours.
fn written_sequence(r: usize, kind: GadgetKind, p: &[usize]) -> (Vec<String>, Vec<String>, Option<String>) {
    let f = |i: usize, n: usize| n + 2 * i * r * r;
    let site = |a: String, b: String, c: String, d: String| format!("({a}, {b})({c}, {d})");
    match kind {
        GadgetKind::Middle => {
            let (a, c) = (p[0], p[1]);
            let seq = vec![
                mono([&st(r), &s(f(2, c)), "x", &st(c)], '+'),
                mono([&s(f(1, c)), &st(a), &st(f(2, c)), "x"], '-'),
                mono([&st(r), "x", &s(f(3, c)), &st(f(1, c))], '+'),
                mono(["x", &st(f(3, c)), &s(a), &s(0)], '-'),
                mono([&st(0), &s(f(4, c + 1)), "x", &st(f(1, c))], '+'),
                mono([&s(c + 1), &st(a), &st(f(4, c + 1)), "x"], '-'),
            ];
            (seq, vec![site(s(a), s(0), s(c + 1), st(a))], None)
        }
        GadgetKind::Outer => {
            let a = p[0];
            let seq = vec![
                mono([&st(r), "x", &s(f(5, r)), &st(r)], '+'),
                mono(["x", &st(f(5, r)), &s(a), &st(f(6, a))], '-'),
                mono([&s(f(6, a)), &st(a + 1), "x", &st(r)], '+'),
                mono(["x", &st(a), &s(a + 1), &s(f(7, r))], '-'),
                mono([&st(f(7, r)), "x", &s(f(8, r)), &st(f(6, a))], '+'),
                mono(["x", &st(f(8, r)), &s(a + 1), &s(0)], '-'),
                mono([&st(0), &s(f(9, a)), "x", &st(f(6, a))], '+'),
                mono([&s(0), &st(a + 1), &st(f(9, a)), "x"], '-'),
            ];
            (seq, vec![site(s(a + 1), s(0), s(0), st(a + 1))], None)
        }
        GadgetKind::Inner => {
            let (a, b, c) = (p[0], p[1], p[2]);
            let commuting = mono(["x", &st(f(10, b + 1)), &s(a), &s(b + 1)], '-');
            let seq = vec![
                mono([&st(b), &s(f(10, c)), &s(f(10, b + 1)), &st(c)], '+'),
                mono([&s(f(11, c)), &st(a), &st(f(10, c)), "x"], '-'),
                commuting.clone(),
                mono([&st(b), "x", &s(f(13, b)), &st(f(11, c))], '+'),
                mono(["x", &st(f(13, b)), &s(a), &s(f(12, b))], '-'),
                mono([&st(f(12, b)), &s(f(14, c)), "x", &st(f(11, c))], '+'),
                mono([&s(c), &st(a), &st(f(14, c)), "x"], '-'),
                mono([&st(f(12, b)), "x", &s(f(15, b + 1)), &st(c)], '+'),
                mono(["x", &st(f(15, b + 1)), &s(a), &s(b + 1)], '-'),
            ];
            let end = site(s(a), s(b + 1), s(c), st(a));
            (seq, vec![end.clone(), end], Some(commuting))
        }
        _ => unreachable!(),
    }
}

/// Replays `seq` in the gadget's harness, requiring each monomer to fit
/// exactly one open site. Returns the final polymer.
fn replay_written(harness: &InsertionSystem, seq: &[String]) -> Result<Polymer, String> {
    let mut p = Polymer::initial(harness);
    for m in seq {
        let id = (0..harness.size() as MonomerId)
            .find(|&i| harness.render_monomer(i) == *m)
            .ok_or_else(|| format!("{m} is not a monomer of the system"))?;
        let gaps: Vec<usize> = p
            .admissible_pairs(harness)
            .into_iter()
            .filter(|&(_, x)| x == id)
            .map(|(g, _)| g)
            .collect();
        if gaps.len() != 1 {
            return Err(format!("{m} fits {} sites", gaps.len()));
        }
        p = p.insert(harness, gaps[0], id).map_err(|e| e.to_string())?;
    }
    Ok(p)
}

fn criterion_9() -> Outcome {
    let mut ok = true;
    let mut replays = 0;
    let mut problems = Vec::new();
    for r in 1..=3 {
        let counter = Counter::generate(r).unwrap();
        let mut cases: Vec<(GadgetKind, Vec<usize>)> = Vec::new();
        for a in 0..=r {
            for c in 0..r {
                cases.push((GadgetKind::Middle, vec![a, c]));
            }
        }
        for a in 0..r {
            cases.push((GadgetKind::Outer, vec![a]));
        }
        for a in 0..=r {
            for b in 0..r {
                for c in 0..=r {
                    cases.push((GadgetKind::Inner, vec![a, b, c]));
                }
            }
        }
        for (kind, params) in cases {
            replays += 1;
            let (seq, ends, commuting) = written_sequence(r, kind, &params);
            let trace = match verify_gadget(r, kind, &params) {
                Ok(t) => t,
                Err(e) => {
                    problems.push(format!("r={r} {kind} {params:?}: {e}"));
                    ok = false;
                    continue;
                }
            };
            let h = &trace.harness;
            let got: Vec<String> = trace.steps.iter().map(|st| h.render_monomer(st.monomer)).collect();
            let drop = |v: &[String]| -> Vec<String> {
                v.iter().filter(|m| Some(*m) != commuting.as_ref()).cloned().collect()
            };
            let same_steps = got.len() == seq.len() && drop(&got) == drop(&seq);
            let written = replay_written(h, &seq);
            let case_ok = match &written {
                Ok(p) => {
                    let mut found: Vec<String> = Vec::new();
                    let mut leftovers_unusable = true;
                    for is in p.sites(h) {
                        let name = h.render_site(&is.site);
                        if ends.contains(&name) {
                            found.push(name);
                        } else if counter.system.is_usable(&is.site) {
                            leftovers_unusable = false;
                        }
                    }
                    let mut want = ends.clone();
                    want.sort();
                    found.sort();
                    let trace_ends: Vec<String> = trace.end_sites.iter().map(|s| h.render_site(s)).collect();
                    *p == trace.final_polymer()
                        && found == want
                        && leftovers_unusable
                        && trace_ends == ends
                        && trace.byproducts.iter().all(|b| !counter.system.is_usable(b))
                }
                Err(_) => false,
            };
            if !(same_steps && case_ok) {
                ok = false;
                problems.push(format!(
                    "r={r} {kind} {params:?}: steps match {same_steps}, replay {:?}",
                    written.err()
                ));
            }
        }
    }
    let detail = if problems.is_empty() {
        format!("{replays} middle/outer/inner replays for r=1..3 match the written sequences")
    } else {
        problems.truncate(3);
        problems.join("; ")
    };
    outcome(ok, detail)
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    let mut files = 0;
    let dir = std::fs::read_dir(fixture("")).unwrap();
    let mut names: Vec<String> = dir.map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    for name in &names {
        let text = read_fixture(name);
        let back = if name.ends_with(".grammar") {
            emit_grammar(&parse_grammar(&text).unwrap())
        } else if name.ends_with(".sys") {
            emit_system(&parse_system(&text).unwrap())
        } else {
            continue;
        };
        files += 1;
        ok &= back == text;
    }
    let mut steps = 0;
    for r in 1..=2 {
        let c = Counter::generate(r).unwrap();
        let a = run(&c.system, 11, Caps::none());
        let b = run(&c.system, 11, Caps::none());
        ok &= a.verify(&c.system).is_ok();
        ok &= a.events == b.events && a.final_polymer == b.final_polymer;
        ok &= a.to_csv(&c.system, Some(&c.spec)) == b.to_csv(&c.system, Some(&c.spec));
        steps += a.events.len();
    }
    outcome(
        ok,
        format!("{files} fixture files byte-identical; traces of {steps} steps replay exactly and repeat per seed"),
    )
}

fn main() {
    // `cargo test` passes harness flags; there are no test names to filter
    let started = Instant::now();
    let mut gating_failures = 0;
    let mut report = |n: usize, name: &str, o: Outcome| {
        let status = match (o.pass, o.gating) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (not gating)",
        };
        if !o.pass && o.gating {
            gating_failures += 1;
        }
        println!("criterion {n:>2} {name}: {status}: {}", o.detail);
    };
    report(1, "expression pipeline", criterion_1());
    report(2, "insertion patterns", criterion_2());
    report(3, "counter generation", criterion_3());
    report(4, "counter determinism", criterion_4());
    report(5, "length recurrence", criterion_5());
    report(6, "usable-site bound", criterion_6());
    report(7, "kinetics calibration", criterion_7());
    report(8, "completion time", criterion_8());
    report(9, "gadget replays", criterion_9());
    report(10, "round trips", criterion_10());
    println!("acceptance finished in {:.0?}", started.elapsed());
    if gating_failures > 0 {
        std::process::exit(1);
    }
}
