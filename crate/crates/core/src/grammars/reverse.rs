//! Insertion system to context-free grammar: one nonterminal per usable
//! site type.
//!
//! A site `(a,b)(c,d)` that admits monomer `m` rewrites to the two sites
//! `(a,b)(m.a,m.b)` and `(m.c,m.d)(c,d)`. To spell string representations
//! exactly, each rule also emits `m`'s four symbols between the children;
//! children that admit nothing are dropped from the right-hand side, so a
//! completed derivation of a site is the string of whatever fills it.

use rustc_hash::FxHashSet;

use super::cfg::{GSym, Grammar, Rule};
use super::GrammarError;
use crate::model::{InsertionSystem, MonomerId, Site, SiteGraph};

/// Default bound on distinct site types explored.
pub const SITE_CAP: usize = 1 << 20;

/// One structural rule `A_site -> A_left A_right`, before literals are
/// attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SiteRule {
    pub site: Site,
    pub monomer: MonomerId,
    pub left: Site,
    pub right: Site,
}

pub fn site_name(system: &InsertionSystem, site: &Site) -> String {
    let t = system.symbols();
    format!(
        "A({},{})({},{})",
        t.render(site.left[0]),
        t.render(site.left[1]),
        t.render(site.right[0]),
        t.render(site.right[1])
    )
}

impl SiteRule {
    pub fn render(&self, system: &InsertionSystem) -> String {
        format!(
            "{} -> {} {}",
            site_name(system, &self.site),
            site_name(system, &self.left),
            site_name(system, &self.right)
        )
    }
}

/// Every structural rule over site types reachable from the initiator.
pub fn site_rules(system: &InsertionSystem, cap: usize) -> Result<Vec<SiteRule>, GrammarError> {
    let graph = SiteGraph::build(system, cap);
    if graph.is_truncated() {
        return Err(GrammarError::SiteCap { cap });
    }
    let mut out = Vec::new();
    for id in 0..graph.len() {
        for e in graph.edges(id) {
            out.push(SiteRule {
                site: graph.site(id),
                monomer: e.monomer,
                left: graph.site(e.left),
                right: graph.site(e.right),
            });
        }
    }
    Ok(out)
}

pub fn is_to_cfg(system: &InsertionSystem) -> Result<Grammar, GrammarError> {
    is_to_cfg_capped(system, SITE_CAP)
}

pub fn is_to_cfg_capped(system: &InsertionSystem, cap: usize) -> Result<Grammar, GrammarError> {
    let graph = SiteGraph::build(system, cap);
    if graph.is_truncated() {
        return Err(GrammarError::SiteCap { cap });
    }
    let table = system.symbols();
    let mut terminals: Vec<String> = Vec::new();
    let mut term_of = rustc_hash::FxHashMap::default();
    let mut term = |name: String, terminals: &mut Vec<String>| -> GSym {
        GSym::T(*term_of.entry(name.clone()).or_insert_with(|| {
            terminals.push(name);
            terminals.len() - 1
        }))
    };

    let usable: Vec<usize> = (0..graph.len()).filter(|&i| !graph.edges(i).is_empty()).collect();
    let mut nt_of = vec![usize::MAX; graph.len()];
    let mut taken: FxHashSet<String> = table
        .names()
        .iter()
        .flat_map(|n| [n.clone(), format!("{n}*")])
        .collect();
    let mut start_name = "S".to_string();
    while taken.contains(&start_name) {
        start_name.push('\'');
    }
    taken.insert(start_name.clone());
    let mut nonterminals = vec![start_name];
    for &i in &usable {
        nt_of[i] = nonterminals.len();
        nonterminals.push(site_name(system, &graph.site(i)));
    }

    let mut rules = Vec::new();
    let init = system.initiator();
    let mut rhs = vec![
        term(table.render(init.left[0]), &mut terminals),
        term(table.render(init.left[1]), &mut terminals),
    ];
    if nt_of[graph.root()] != usize::MAX {
        rhs.push(GSym::N(nt_of[graph.root()]));
    }
    rhs.push(term(table.render(init.right[0]), &mut terminals));
    rhs.push(term(table.render(init.right[1]), &mut terminals));
    rules.push(Rule { lhs: 0, rhs });

    for &i in &usable {
        for e in graph.edges(i) {
            let mut rhs = Vec::with_capacity(6);
            if nt_of[e.left] != usize::MAX {
                rhs.push(GSym::N(nt_of[e.left]));
            }
            for s in system.monomer(e.monomer).quad {
                rhs.push(term(table.render(s), &mut terminals));
            }
            if nt_of[e.right] != usize::MAX {
                rhs.push(GSym::N(nt_of[e.right]));
            }
            rules.push(Rule { lhs: nt_of[i], rhs });
        }
    }
    Ok(Grammar::from_parts(terminals, nonterminals, rules, 0))
}
