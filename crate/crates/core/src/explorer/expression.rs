//! Reading a grammar's language off a system's terminal strings: a
//! symbol-wise map to terminals or ε, with a bound on consecutive ε.

use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use super::reachable::terminal_strings;
use super::{ExplorerError, Verdict};
use crate::grammars::{cyk, enumerate_language, Compiled, Grammar, Word, KAPPA};
use crate::model::{InsertionSystem, Symbol, SymbolTable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpressionMap {
    images: FxHashMap<Symbol, Option<String>>,
    pub kappa: usize,
}

impl ExpressionMap {
    pub fn new(kappa: usize) -> Self {
        ExpressionMap {
            images: FxHashMap::default(),
            kappa,
        }
    }

    /// `None` maps to ε.
    pub fn set(&mut self, symbol: Symbol, image: Option<String>) {
        self.images.insert(symbol, image);
    }

    pub fn image(&self, symbol: Symbol) -> Option<&Option<String>> {
        self.images.get(&symbol)
    }

    /// Terminal symbols map to themselves, everything else (stars included)
    /// to ε, with window bound 16.
    pub fn for_compiled(c: &Compiled) -> Self {
        let mut map = ExpressionMap::new(KAPPA);
        let table = c.system.symbols();
        for base in 0..table.len() as u32 {
            for starred in [false, true] {
                let s = Symbol::new(base, starred);
                let image = c.is_terminal_symbol(s).then(|| table.render(s));
                map.set(s, image);
            }
        }
        map
    }

    /// For a system read back from a file: unstarred symbols named like a
    /// grammar terminal map to that terminal, everything else to ε.
    pub fn for_terminals(table: &SymbolTable, terminals: &[String], kappa: usize) -> Self {
        let mut map = ExpressionMap::new(kappa);
        for base in 0..table.len() as u32 {
            let name = table.name(base);
            let plain = terminals.iter().any(|t| t == name).then(|| name.to_string());
            map.set(Symbol::new(base, false), plain);
            map.set(Symbol::new(base, true), None);
        }
        map
    }

    /// Whether every symbol of `table`, in both forms, has an image.
    pub fn is_total_on(&self, table: &SymbolTable) -> bool {
        (0..table.len() as u32).all(|b| {
            self.images.contains_key(&Symbol::new(b, false)) && self.images.contains_key(&Symbol::new(b, true))
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StringImage {
    pub string_length: usize,
    pub word: Word,
    /// Lengths of the maximal ε-runs, left to right.
    pub runs: Vec<usize>,
}

impl StringImage {
    pub fn max_run(&self) -> usize {
        self.runs.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ExpressionReport {
    pub words: BTreeSet<Word>,
    pub images: Vec<StringImage>,
    pub max_run: usize,
    /// Some string has `kappa` or more consecutive ε.
    pub window_violation: bool,
}

impl ExpressionReport {
    /// Distinct ε-run sequences seen.
    pub fn run_patterns(&self) -> BTreeSet<Vec<usize>> {
        self.images.iter().map(|i| i.runs.clone()).collect()
    }
}

pub fn apply_expression<'a>(
    strings: impl IntoIterator<Item = &'a Vec<Symbol>>,
    map: &ExpressionMap,
    table: &SymbolTable,
) -> Result<ExpressionReport, ExplorerError> {
    let mut report = ExpressionReport::default();
    for s in strings {
        let mut img = StringImage {
            string_length: s.len(),
            ..StringImage::default()
        };
        let mut run = 0;
        for &sym in s {
            match map.image(sym) {
                None => return Err(ExplorerError::Unmapped(table.render(sym))),
                Some(None) => run += 1,
                Some(Some(t)) => {
                    if run > 0 {
                        img.runs.push(run);
                    }
                    run = 0;
                    img.word.push(t.clone());
                }
            }
        }
        if run > 0 {
            img.runs.push(run);
        }
        report.max_run = report.max_run.max(img.max_run());
        report.words.insert(img.word.clone());
        report.images.push(img);
    }
    report.window_violation = report.max_run >= map.kappa;
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct ExpressionVerdict {
    pub verdict: Verdict,
    pub max_n: usize,
    pub produced: BTreeSet<Word>,
    pub expected: BTreeSet<Word>,
    /// In the grammar's language but never produced.
    pub missing: BTreeSet<Word>,
    /// Produced but not in the language.
    pub extra: BTreeSet<Word>,
    /// Produced words CYK rejects, and enumerated words CYK rejects.
    pub cyk_disagreements: Vec<Word>,
    pub report: ExpressionReport,
    pub polymers_explored: usize,
    pub truncated: bool,
}

/// Compares the system's terminal strings up to `16 max_n - 8` symbols,
/// mapped through `map`, with the grammar's words of length at most
/// `max_n`. Membership is cross-checked with CYK both ways.
pub fn verify_expression(
    system: &InsertionSystem,
    grammar: &Grammar,
    map: &ExpressionMap,
    max_n: usize,
    max_count: usize,
) -> Result<ExpressionVerdict, ExplorerError> {
    if !grammar.is_cnf() {
        return Err(ExplorerError::NotCnf);
    }
    let max_string = (16 * max_n).saturating_sub(8);
    let ts = terminal_strings(system, max_string, max_count);
    let report = apply_expression(&ts.strings, map, system.symbols())?;
    let produced = report.words.clone();
    let expected = enumerate_language(grammar, max_n)?;
    let mut cyk_disagreements = Vec::new();
    for w in &produced {
        if !w.is_empty() && !cyk(grammar, w)? {
            cyk_disagreements.push(w.clone());
        }
    }
    for w in &expected {
        if !cyk(grammar, w)? {
            cyk_disagreements.push(w.clone());
        }
    }
    let missing: BTreeSet<Word> = expected.difference(&produced).cloned().collect();
    let extra: BTreeSet<Word> = produced.difference(&expected).cloned().collect();
    let verdict = if !extra.is_empty() || report.window_violation {
        Verdict::Fail
    } else if ts.truncated {
        Verdict::Inconclusive
    } else if missing.is_empty() && cyk_disagreements.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ExpressionVerdict {
        verdict,
        max_n,
        produced,
        expected,
        missing,
        extra,
        cyk_disagreements,
        report,
        polymers_explored: ts.explored,
        truncated: ts.truncated,
    })
}
