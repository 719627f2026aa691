//! Exhaustive and statistical checks over what a system can build.

pub mod census;
pub mod determinism;
pub mod expression;
pub mod patterns;
pub mod reachable;

use std::fmt;

pub use census::{log2_within, usable_sites, SiteCensus};
pub use determinism::{
    verify_deterministic_enumerated, verify_deterministic_exhaustive, verify_deterministic_stochastic,
    verify_deterministic_stochastic_observed, DeterminismVerdict, Evidence, Witness,
};
pub use expression::{apply_expression, verify_expression, ExpressionMap, ExpressionReport, ExpressionVerdict};
pub use patterns::{audit_insertion_patterns, PatternAudit};
pub use reachable::{reachable, terminal_strings, ReachableSet, TerminalStrings};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    Fail,
    /// A cap bound before the question was settled.
    Inconclusive,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExplorerError {
    #[error("symbol {0} has no image under the expression map")]
    Unmapped(String),
    #[error("grammar is not in Chomsky normal form")]
    NotCnf,
    #[error(transparent)]
    Grammar(#[from] crate::grammars::GrammarError),
}
