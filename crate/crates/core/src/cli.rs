//! The `insertion` command line.
//!
//! Exit codes: 0 pass, 1 fail, 2 inconclusive (a cap bound), 3 bad usage
//! or malformed input, 4 I/O failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::counter::gadget::{verify_gadget, GadgetKind};
use crate::counter::{predicted_monomer_count, Counter};
use crate::explorer::{
    reachable, usable_sites, verify_deterministic_exhaustive, verify_deterministic_stochastic, verify_expression,
    DeterminismVerdict, ExpressionMap, Verdict, Witness,
};
use crate::format::{emit_grammar, emit_system, parse_grammar, parse_system};
use crate::grammars::{compile, is_to_cfg, to_cnf, KAPPA};
use crate::kinetics::{self, seed_range, trials, Caps, RNG_NAME};
use crate::model::{validate, InsertionSystem};

pub const EXIT_USAGE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "insertion", version, about = "Insertion systems: compile, simulate, verify")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a context-free grammar into an insertion system.
    Compile {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Read an insertion system back as a grammar over its site types.
    Reverse {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate the counter system for loop bound r.
    Counter {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the stochastic kinetics: one traced run, or many trials.
    Simulate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Run seeds seed, seed+1, ... and write one row per trial.
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        max_steps: Option<u64>,
        #[arg(long)]
        max_time: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the strings of reachable polymers up to a length in units.
    Enumerate {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        max_length: usize,
        #[arg(long)]
        terminal_only: bool,
        #[arg(long, default_value_t = 1_000_000)]
        max_count: usize,
    },
    /// Check determinism or grammar expression.
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        grammar: Option<PathBuf>,
        /// Longest word compared in expression mode.
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Longest polymer enumerated or materialized, in units.
        #[arg(long, default_value_t = 1 << 20)]
        max_length: usize,
        #[arg(long)]
        max_steps: Option<u64>,
        #[arg(long, default_value_t = 2_000_000)]
        max_count: usize,
    },
    /// Validation report, usable-site census and bound checks.
    Analyze {
        #[arg(long)]
        system: PathBuf,
    },
    /// Replay a counter gadget and print it in diamond notation.
    Gadget {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        kind: String,
        /// Values as `a=1 c=0`, or bare numbers in parameter order.
        #[arg(long, num_args = 0..)]
        params: Vec<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    DeterministicExhaustive,
    DeterministicStochastic,
    Expression,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_system(path: &Path) -> Result<InsertionSystem, CliError> {
    parse_system(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code()
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Compile { grammar, out } => {
            let g = parse_grammar(&read(&grammar)?).map_err(|e| usage(format!("{}: {e}", grammar.display())))?;
            let c = compile(&g).map_err(usage)?;
            write_out(out.as_deref(), &emit_system(&c.system))?;
            eprintln!(
                "monomer types: {} ({} emitted before merging duplicates)",
                c.system.size(),
                c.emitted
            );
            Ok(0)
        }
        Command::Reverse { system, out } => {
            let sys = load_system(&system)?;
            let g = is_to_cfg(&sys).map_err(usage)?;
            write_out(out.as_deref(), &emit_grammar(&g))?;
            eprintln!("rules: {}", g.rules().len());
            Ok(0)
        }
        Command::Counter { r, out } => {
            let c = Counter::generate(r).map_err(usage)?;
            write_out(out.as_deref(), &emit_system(&c.system))?;
            eprintln!(
                "r = {r}: {} monomer types (12r² + 24r + 3 = {})",
                c.system.size(),
                predicted_monomer_count(r)
            );
            Ok(0)
        }
        Command::Simulate {
            system,
            seed,
            trials: count,
            max_steps,
            max_time,
            out,
        } => simulate(&system, seed, count, Caps { max_steps, max_time }, out.as_deref()),
        Command::Enumerate {
            system,
            max_length,
            terminal_only,
            max_count,
        } => {
            let sys = load_system(&system)?;
            let set = reachable(&sys, max_length, max_count);
            let mut lines: Vec<String> = set
                .polymers()
                .iter()
                .filter(|p| !terminal_only || p.is_terminal(&sys))
                .map(|p| p.render(&sys))
                .collect();
            lines.sort();
            lines.dedup();
            let mut text = String::new();
            for l in &lines {
                writeln!(text, "{l}").unwrap();
            }
            print!("{text}");
            if set.truncated {
                eprintln!("truncated at {max_count} polymers");
                return Ok(Verdict::Inconclusive.exit_code());
            }
            Ok(0)
        }
        Command::Verify {
            system,
            mode,
            grammar,
            max_n,
            trials: count,
            seed,
            max_length,
            max_steps,
            max_count,
        } => {
            let sys = load_system(&system)?;
            let verdict = match mode {
                Mode::DeterministicExhaustive => {
                    let v = verify_deterministic_exhaustive(&sys, max_length);
                    print!("{}", describe_determinism(&sys, &v));
                    v.verdict
                }
                Mode::DeterministicStochastic => {
                    let caps = Caps {
                        max_steps,
                        max_time: None,
                    };
                    println!("rng: {RNG_NAME}, seeds {seed}..{}", seed + count as u64);
                    let v = verify_deterministic_stochastic(&sys, &seed_range(seed, count), caps);
                    print!("{}", describe_determinism(&sys, &v));
                    v.verdict
                }
                Mode::Expression => {
                    let path = grammar.ok_or_else(|| usage("expression mode needs --grammar"))?;
                    let g = parse_grammar(&read(&path)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
                    let cnf = to_cnf(&g).map_err(usage)?;
                    let map = ExpressionMap::for_terminals(sys.symbols(), cnf.terminals(), KAPPA);
                    let v = verify_expression(&sys, &cnf, &map, max_n, max_count).map_err(usage)?;
                    println!("verdict: {}", v.verdict);
                    println!("words compared up to length {max_n}: {}", v.expected.len());
                    println!("polymers explored: {}", v.polymers_explored);
                    println!("longest ε-run: {} (window {})", v.report.max_run, map.kappa);
                    let show = |ws: &std::collections::BTreeSet<Vec<String>>| {
                        ws.iter().map(|w| w.concat()).collect::<Vec<_>>().join(" ")
                    };
                    if !v.missing.is_empty() {
                        println!("missing: {}", show(&v.missing));
                    }
                    if !v.extra.is_empty() {
                        println!("extra: {}", show(&v.extra));
                    }
                    if v.truncated {
                        println!("note: exploration stopped at {max_count} polymers");
                    }
                    v.verdict
                }
            };
            Ok(verdict.exit_code())
        }
        Command::Analyze { system } => {
            let sys = load_system(&system)?;
            print!("{}", analyze(&sys));
            Ok(0)
        }
        Command::Gadget { r, kind, params } => {
            let kind: GadgetKind = kind.parse().map_err(usage)?;
            let values = gadget_params(kind, &params)?;
            match verify_gadget(r, kind, &values) {
                Ok(trace) => {
                    println!("{}", trace.render_diamond());
                    let t = trace.harness.symbols();
                    let render = |s: &crate::model::Site| s.render(t);
                    println!(
                        "end: {}",
                        trace.end_sites.iter().map(render).collect::<Vec<_>>().join(", ")
                    );
                    println!("unusable byproducts: {}", trace.byproducts.len());
                    println!("insertion orders checked: {}", trace.orders);
                    Ok(0)
                }
                Err(e) => {
                    println!("gadget failed: {e}");
                    Ok(1)
                }
            }
        }
    }
}

fn gadget_params(kind: GadgetKind, raw: &[String]) -> Result<Vec<usize>, CliError> {
    let names = kind.param_names();
    let mut values: Vec<Option<usize>> = vec![None; names.len()];
    for (i, item) in raw.iter().flat_map(|s| s.split(',')).filter(|s| !s.is_empty()).enumerate() {
        let (slot, text) = match item.split_once('=') {
            Some((k, v)) => {
                let slot = names
                    .iter()
                    .position(|n| *n == k)
                    .ok_or_else(|| usage(format!("{kind} takes parameters {}", names.join(", "))))?;
                (slot, v)
            }
            None if i < names.len() => (i, item),
            None => return Err(usage(format!("{kind} takes {} parameters", names.len()))),
        };
        values[slot] = Some(text.parse().map_err(|_| usage(format!("bad parameter value {text:?}")))?);
    }
    values
        .into_iter()
        .zip(names)
        .map(|(v, n)| v.ok_or_else(|| usage(format!("missing parameter {n} for {kind}"))))
        .collect()
}

fn simulate(path: &Path, seed: u64, count: Option<usize>, caps: Caps, out: Option<&Path>) -> Result<i32, CliError> {
    let sys = load_system(path)?;
    let counter = Counter::recognize(&sys);
    match count {
        None => {
            let trace = kinetics::run(&sys, seed, caps);
            write_out(out, &trace.to_csv(&sys, counter.as_ref().map(|c| &c.spec)))?;
            eprintln!(
                "rng {RNG_NAME} seed {seed}: {} steps, time {}, {}",
                trace.events.len(),
                trace.elapsed,
                trace.terminated.name()
            );
            Ok(0)
        }
        Some(0) => Err(usage("--trials must be at least 1")),
        Some(n) => {
            let stats = trials(&sys, &seed_range(seed, n), caps);
            write_out(out, &stats.to_csv(counter.as_ref().map(|c| c.spec.r)))?;
            eprintln!(
                "rng {RNG_NAME} seeds {seed}..{}: mean {:.6} sd {:.6} median {:.6} non-terminal {}",
                seed + n as u64,
                stats.mean,
                stats.variance.sqrt(),
                stats.quantile(0.5),
                stats.non_terminal.len()
            );
            Ok(if stats.all_terminal() { 0 } else { Verdict::Inconclusive.exit_code() })
        }
    }
}

pub fn describe_witness(sys: &InsertionSystem, w: &Witness) -> String {
    let t = sys.symbols();
    match w {
        Witness::MultiCandidate { site, candidates } => format!(
            "site {} admits {}",
            site.render(t),
            candidates
                .iter()
                .map(|&m| sys.render_monomer(m))
                .collect::<Vec<_>>()
                .join(" and ")
        ),
        Witness::SecondTerminal { first, second } => format!(
            "two terminal polymers:\n  {}\n  {}",
            first.render(sys),
            second.render(sys)
        ),
        Witness::OverLength { terminal_length, length } => {
            format!("a polymer of length {length} is reachable beside a terminal one of length {terminal_length}")
        }
        Witness::Cycle { sites } => format!(
            "site types regenerate themselves: {}",
            sites.iter().map(|s| s.render(t)).collect::<Vec<_>>().join(" -> ")
        ),
    }
}

pub fn describe_determinism(sys: &InsertionSystem, v: &DeterminismVerdict) -> String {
    let mut out = String::new();
    let e = &v.evidence;
    writeln!(out, "verdict: {}", v.verdict).unwrap();
    writeln!(out, "method: {}", e.method).unwrap();
    if e.site_types > 0 {
        writeln!(out, "site types: {}", e.site_types).unwrap();
    }
    if e.polymers > 0 {
        writeln!(out, "polymers enumerated: {}", e.polymers).unwrap();
    }
    if e.trials > 0 {
        writeln!(
            out,
            "trials: {} ({} finished), steps audited: {}, usable sites audited: {}",
            e.trials, e.completed_trials, e.steps_audited, e.sites_audited
        )
        .unwrap();
    }
    if let Some(len) = &v.target_length {
        writeln!(out, "terminal length: {len}").unwrap();
    }
    if let Some(w) = &v.witness {
        writeln!(out, "witness: {}", describe_witness(sys, w)).unwrap();
    }
    if let Some(w) = &v.branching_site {
        writeln!(out, "branching: {}", describe_witness(sys, w)).unwrap();
    }
    if let Some(note) = &e.note {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

pub fn analyze(sys: &InsertionSystem) -> String {
    let mut out = String::new();
    if let Some(c) = Counter::recognize(sys) {
        writeln!(out, "counter system, r = {}", c.spec.r).unwrap();
    }
    let diags = validate(sys);
    if diags.is_empty() {
        writeln!(out, "validation: ok").unwrap();
    } else {
        for d in &diags {
            writeln!(out, "validation: {d}").unwrap();
        }
    }
    let census = usable_sites(sys);
    writeln!(out, "monomer types k: {}", census.k).unwrap();
    writeln!(out, "candidate sites: {}", census.candidates).unwrap();
    writeln!(out, "usable sites: {}", census.usable.len()).unwrap();
    writeln!(out, "bound 4k^(3/2): {:.1}", census.bound()).unwrap();
    writeln!(out, "within bound: {}", if census.within_bound() { "yes" } else { "no" }).unwrap();
    let v = verify_deterministic_exhaustive(sys, 0);
    writeln!(out, "deterministic: {}", v.verdict).unwrap();
    if let Some(w) = &v.branching_site {
        writeln!(out, "branching: {}", describe_witness(sys, w)).unwrap();
    }
    if let (Verdict::Pass, Some(len)) = (v.verdict, &v.target_length) {
        writeln!(out, "terminal length: {len}").unwrap();
        writeln!(
            out,
            "log2(length) within 4k^(3/2): {}",
            if census.length_within_bound(len) { "yes" } else { "no" }
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gadget_params_by_name_or_position() {
        let p = |xs: &[&str]| gadget_params(GadgetKind::Middle, &xs.iter().map(|s| s.to_string()).collect::<Vec<_>>());
        assert_eq!(p(&["a=1", "c=0"]).unwrap(), vec![1, 0]);
        assert_eq!(p(&["1", "0"]).unwrap(), vec![1, 0]);
        assert_eq!(p(&["c=0,a=2"]).unwrap(), vec![2, 0]);
        assert!(p(&["a=1"]).is_err());
        assert!(p(&["b=1", "a=0", "c=0"]).is_err());
    }

    #[test]
    fn usage_errors_exit_three() {
        assert_eq!(run(["insertion", "frobnicate"]), EXIT_USAGE);
        assert_eq!(run(["insertion", "counter"]), EXIT_USAGE);
        assert_eq!(run(["insertion", "analyze", "--system", "/nonexistent/file"]), EXIT_IO);
    }
}
