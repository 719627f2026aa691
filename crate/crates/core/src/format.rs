//! Text formats for systems and grammars.
//!
//! Both are line oriented with `#` comments. A system file:
//!
//! ```text
//! symbols u a b
//! initiator (u a) (b u*)
//! monomer (a* b* u b) + 1/2
//! ```
//!
//! A grammar file:
//!
//! ```text
//! start S
//! rule S -> A B
//! rule A -> a
//! ```
//!
//! In system files names are runs of characters other than whitespace,
//! parentheses, `*` and `#`, and a trailing `*` marks the complement. In
//! grammar files a name is any whitespace-free run without `#` (site-type
//! names like `A(a,b)(c,d*)` are fine). Emitting a parsed canonical file
//! reproduces it byte for byte.

use std::fmt::Write as _;

use thiserror::Error;

use crate::grammars::Grammar;
use crate::model::{Concentration, Initiator, InsertionSystem, Monomer, Sign, Symbol, SymbolTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Token<'a> {
    text: &'a str,
    col: usize,
}

fn tokenize(line: &str, parens: bool) -> Vec<Token<'_>> {
    let line = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in line.char_indices() {
        let brk = ch.is_whitespace() || parens && (ch == '(' || ch == ')');
        if brk {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &line[s..i],
                    col: s + 1,
                });
            }
            if !ch.is_whitespace() {
                out.push(Token {
                    text: &line[i..i + 1],
                    col: i + 1,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            col: s + 1,
        });
    }
    out
}

fn is_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(['(', ')', '*', '#']) && !s.chars().any(char::is_whitespace)
}

fn is_grammar_name(s: &str) -> bool {
    !s.is_empty() && s != "->" && !s.contains('#') && !s.chars().any(char::is_whitespace)
}

struct Cursor<'a> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, col: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line: self.line,
            col,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<Token<'a>, FormatError> {
        let t = self
            .tokens
            .get(self.pos)
            .copied()
            .ok_or_else(|| self.err(self.end_col, format!("expected {what}")))?;
        self.pos += 1;
        Ok(t)
    }

    fn expect(&mut self, text: &str) -> Result<Token<'a>, FormatError> {
        let t = self.next(&format!("'{text}'"))?;
        if t.text != text {
            return Err(self.err(t.col, format!("expected '{text}', found '{}'", t.text)));
        }
        Ok(t)
    }

    fn finish(&self) -> Result<(), FormatError> {
        match self.tokens.get(self.pos) {
            Some(t) => Err(self.err(t.col, format!("unexpected '{}'", t.text))),
            None => Ok(()),
        }
    }
}

struct SystemParser {
    table: SymbolTable,
    declared: bool,
}

impl SystemParser {
    fn symbol(&mut self, cur: &Cursor<'_>, t: Token<'_>) -> Result<Symbol, FormatError> {
        let (base, starred) = match t.text.strip_suffix('*') {
            Some(b) => (b, true),
            None => (t.text, false),
        };
        if !is_name(base) {
            return Err(cur.err(t.col, format!("malformed symbol '{}'", t.text)));
        }
        let s = match self.table.get(base) {
            Some(s) => s,
            None if self.declared => {
                return Err(cur.err(t.col, format!("symbol '{base}' not declared")));
            }
            None => self.table.intern(base),
        };
        Ok(if starred { s.complement() } else { s })
    }

    fn group<const N: usize>(&mut self, cur: &mut Cursor<'_>) -> Result<[Symbol; N], FormatError> {
        cur.expect("(")?;
        let mut out = [Symbol::plain(0); N];
        for slot in out.iter_mut() {
            let t = cur.next("a symbol")?;
            *slot = self.symbol(cur, t)?;
        }
        cur.expect(")")?;
        Ok(out)
    }
}

pub fn parse_system(text: &str) -> Result<InsertionSystem, FormatError> {
    let mut p = SystemParser {
        table: SymbolTable::new(),
        declared: false,
    };
    let mut initiator: Option<Initiator> = None;
    let mut monomers = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        last_line = i + 1;
        let mut cur = Cursor {
            tokens: tokenize(line, true),
            pos: 0,
            line: i + 1,
            end_col: line.chars().count() + 1,
        };
        let Some(head) = cur.tokens.first().copied() else { continue };
        cur.pos = 1;
        match head.text {
            "symbols" => {
                if !monomers.is_empty() || initiator.is_some() {
                    return Err(cur.err(head.col, "symbols must come before the initiator and monomers"));
                }
                while let Some(&t) = cur.tokens.get(cur.pos) {
                    cur.pos += 1;
                    if !is_name(t.text) {
                        return Err(cur.err(t.col, format!("malformed symbol name '{}'", t.text)));
                    }
                    if p.table.get(t.text).is_some() {
                        return Err(cur.err(t.col, format!("symbol '{}' declared twice", t.text)));
                    }
                    p.table.intern(t.text);
                }
                p.declared = true;
            }
            "initiator" => {
                if initiator.is_some() {
                    return Err(cur.err(head.col, "second initiator"));
                }
                let left = p.group::<2>(&mut cur)?;
                let right = p.group::<2>(&mut cur)?;
                cur.finish()?;
                initiator = Some(Initiator::new_unchecked(left, right));
            }
            "monomer" => {
                let quad = p.group::<4>(&mut cur)?;
                let t = cur.next("a sign")?;
                let sign = match t.text {
                    "+" => Sign::Positive,
                    "-" => Sign::Negative,
                    other => return Err(cur.err(t.col, format!("expected '+' or '-', found '{other}'"))),
                };
                let t = cur.next("a concentration")?;
                let conc: Concentration = t.text.parse().map_err(|e| cur.err(t.col, format!("{e}")))?;
                cur.finish()?;
                monomers.push(Monomer::new(quad, sign, conc));
            }
            other => return Err(cur.err(head.col, format!("unknown directive '{other}'"))),
        }
    }
    let initiator = initiator.ok_or(FormatError {
        line: last_line.max(1),
        col: 1,
        message: "missing initiator line".into(),
    })?;
    Ok(InsertionSystem::new(p.table, monomers, initiator))
}

pub fn emit_system(system: &InsertionSystem) -> String {
    let t = system.symbols();
    let mut out = String::from("symbols");
    for name in t.names() {
        out.push(' ');
        out.push_str(name);
    }
    out.push('\n');
    let init = system.initiator();
    let r = |s: Symbol| t.render(s);
    writeln!(
        out,
        "initiator ({} {}) ({} {})",
        r(init.left[0]),
        r(init.left[1]),
        r(init.right[0]),
        r(init.right[1])
    )
    .unwrap();
    for m in system.monomers() {
        let [a, b, c, d] = m.quad.map(r);
        writeln!(out, "monomer ({a} {b} {c} {d}) {} {}", m.sign.as_char(), m.concentration).unwrap();
    }
    out
}

/// Nonterminals are the start symbol and every rule's left side; all other
/// names are terminals. `rule S ->` with nothing after the arrow is an
/// ε-rule.
pub fn parse_grammar(text: &str) -> Result<Grammar, FormatError> {
    let mut start: Option<String> = None;
    let mut rules: Vec<(String, Vec<String>)> = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        last_line = i + 1;
        let mut cur = Cursor {
            tokens: tokenize(line, false),
            pos: 0,
            line: i + 1,
            end_col: line.chars().count() + 1,
        };
        let Some(head) = cur.tokens.first().copied() else { continue };
        cur.pos = 1;
        let name = |cur: &mut Cursor<'_>, what: &str| -> Result<String, FormatError> {
            let t = cur.next(what)?;
            if !is_grammar_name(t.text) {
                return Err(cur.err(t.col, format!("malformed name '{}'", t.text)));
            }
            Ok(t.text.to_string())
        };
        match head.text {
            "start" => {
                if start.is_some() {
                    return Err(cur.err(head.col, "second start line"));
                }
                start = Some(name(&mut cur, "a nonterminal")?);
                cur.finish()?;
            }
            "rule" => {
                let lhs = name(&mut cur, "a nonterminal")?;
                cur.expect("->")?;
                let mut rhs = Vec::new();
                while cur.pos < cur.tokens.len() {
                    rhs.push(name(&mut cur, "a symbol")?);
                }
                rules.push((lhs, rhs));
            }
            other => return Err(cur.err(head.col, format!("unknown directive '{other}'"))),
        }
    }
    let start = start.ok_or(FormatError {
        line: last_line.max(1),
        col: 1,
        message: "missing start line".into(),
    })?;
    Grammar::from_named(&start, &rules).map_err(|e| FormatError {
        line: last_line.max(1),
        col: 1,
        message: e.to_string(),
    })
}

pub fn emit_grammar(g: &Grammar) -> String {
    g.to_string()
}
