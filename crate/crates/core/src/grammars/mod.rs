//! Context-free and symbol-pair grammars, and the reductions between
//! grammars and insertion systems.

pub mod cfg;
pub mod compile;
pub mod reverse;
pub mod symbol_pair;

use std::collections::BTreeSet;

pub use cfg::{
    cyk, enumerate_language, enumerate_language_capped, random_cnf, reduce, render_word, to_cnf, GSym,
    Grammar, Rule, Word,
};
pub use compile::{sp_to_is, Compiled, Family, KAPPA};
pub use reverse::{is_to_cfg, site_rules, SiteRule};
pub use symbol_pair::{cfg_to_sp, SpRule, SymbolPairGrammar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GrammarError {
    #[error("the language contains the empty string, which no insertion system can express")]
    EmptyStringInLanguage,
    #[error("the grammar generates no strings")]
    EmptyLanguage,
    #[error("grammar is not in Chomsky normal form")]
    NotCnf,
    #[error("membership of the empty string is not defined here")]
    EmptyWord,
    #[error("enumeration held more than {cap} words; {} found before stopping", partial.len())]
    EnumerationCap { cap: usize, partial: BTreeSet<Word> },
    #[error("pair index outside [0, {n})")]
    IndexOutOfRange { n: usize },
    #[error("more than {cap} distinct site types")]
    SiteCap { cap: usize },
}

/// Grammar to insertion system: normal form, index pairs, monomers.
pub fn compile(g: &Grammar) -> Result<Compiled, GrammarError> {
    let cnf = to_cnf(g)?;
    Ok(sp_to_is(&cfg_to_sp(&cnf)?))
}
