use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rustc_hash::{FxHashMap, FxHashSet};

use super::monomer::{big_to_f64, sum_concentrations, Monomer, Sign};
use super::site::{monomer_key, Site};
use super::symbol::{Symbol, SymbolTable};
use super::ModelError;

pub type MonomerId = u32;

/// The two end units `Q = (a, b)` and `R = (c, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Initiator {
    pub left: [Symbol; 2],
    pub right: [Symbol; 2],
}

impl Initiator {
    pub fn new(left: [Symbol; 2], right: [Symbol; 2]) -> Result<Self, ModelError> {
        let init = Initiator { left, right };
        if init.site().is_valid() {
            Ok(init)
        } else {
            Err(ModelError::InvalidInitiator(init.site()))
        }
    }

    /// Skips the adjacency check; [`validate`] reports the violation instead.
    pub fn new_unchecked(left: [Symbol; 2], right: [Symbol; 2]) -> Self {
        Initiator { left, right }
    }

    pub fn site(&self) -> Site {
        Site::new(self.left, self.right)
    }
}

/// Monomer lookup keyed by the symbol pair a site inspects.
#[derive(Clone, Debug, Default)]
struct CandidateIndex {
    positive: FxHashMap<u64, Vec<MonomerId>>,
    negative: FxHashMap<u64, Vec<MonomerId>>,
}

fn pair_key(k: [Symbol; 2]) -> u64 {
    (k[0].raw() as u64) << 32 | k[1].raw() as u64
}

impl CandidateIndex {
    fn build(monomers: &[Monomer]) -> Self {
        let mut index = CandidateIndex::default();
        for (i, m) in monomers.iter().enumerate() {
            let map = match m.sign {
                Sign::Positive => &mut index.positive,
                Sign::Negative => &mut index.negative,
            };
            map.entry(pair_key(monomer_key(m))).or_default().push(i as MonomerId);
        }
        index
    }
}

/// An insertion system: symbols, monomer types with concentrations, and an
/// initiator. Immutable once built; the candidate index is derived.
#[derive(Clone, Debug)]
pub struct InsertionSystem {
    symbols: SymbolTable,
    monomers: Vec<Monomer>,
    initiator: Initiator,
    index: CandidateIndex,
}

impl PartialEq for InsertionSystem {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
            && self.monomers == other.monomers
            && self.initiator == other.initiator
    }
}

impl InsertionSystem {
    pub fn new(symbols: SymbolTable, monomers: Vec<Monomer>, initiator: Initiator) -> Self {
        let index = CandidateIndex::build(&monomers);
        InsertionSystem {
            symbols,
            monomers,
            initiator,
            index,
        }
    }

    /// Same monomers, different initiator. Used for harness polymers.
    pub fn with_initiator(&self, initiator: Initiator) -> Self {
        InsertionSystem {
            symbols: self.symbols.clone(),
            monomers: self.monomers.clone(),
            initiator,
            index: self.index.clone(),
        }
    }

    pub fn symbols(&self) -> &SymbolTable {
        &self.symbols
    }

    pub fn monomers(&self) -> &[Monomer] {
        &self.monomers
    }

    pub fn monomer(&self, id: MonomerId) -> &Monomer {
        &self.monomers[id as usize]
    }

    pub fn initiator(&self) -> Initiator {
        self.initiator
    }

    /// Number of monomer types.
    pub fn size(&self) -> usize {
        self.monomers.len()
    }

    /// Monomers admissible at `site`, in ascending id order.
    #[inline]
    pub fn candidates(&self, site: &Site) -> &[MonomerId] {
        let Some((sign, key)) = site.required_key() else {
            return &[];
        };
        let map = match sign {
            Sign::Positive => &self.index.positive,
            Sign::Negative => &self.index.negative,
        };
        map.get(&pair_key(key)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Owned copies of [`candidates`](Self::candidates).
    pub fn insertable(&self, site: &Site) -> Vec<Monomer> {
        self.candidates(site).iter().map(|&id| *self.monomer(id)).collect()
    }

    pub fn is_usable(&self, site: &Site) -> bool {
        !self.candidates(site).is_empty()
    }

    pub fn render_site(&self, site: &Site) -> String {
        site.render(&self.symbols)
    }

    pub fn render_monomer(&self, id: MonomerId) -> String {
        self.monomer(id).render(&self.symbols)
    }
}

/// A problem found by [`validate`].
#[derive(Clone, Debug, PartialEq)]
pub enum Diagnostic {
    ConcentrationSum(f64),
    NonPositiveConcentration { monomer: usize },
    InvalidInitiator(String),
    UnknownSymbol { context: String, base: u32 },
    DuplicateMonomer { first: usize, second: usize },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::ConcentrationSum(s) => write!(f, "concentration sum {s} > 1"),
            Diagnostic::NonPositiveConcentration { monomer } => {
                write!(f, "monomer {monomer} has concentration 0")
            }
            Diagnostic::InvalidInitiator(site) => {
                write!(f, "initiator {site} violates the complement condition")
            }
            Diagnostic::UnknownSymbol { context, base } => {
                write!(f, "{context} uses symbol #{base} missing from the symbol table")
            }
            Diagnostic::DuplicateMonomer { first, second } => {
                write!(f, "monomers {first} and {second} are the same type")
            }
        }
    }
}

/// Concentrations may exceed 1 by at most this much before it is an error.
pub const CONCENTRATION_TOLERANCE: (u64, u64) = (1, 1_000_000_000);

/// Checks the system-level invariants; an empty list means valid.
pub fn validate(system: &InsertionSystem) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let table = system.symbols();

    let init = system.initiator();
    for (label, half) in [("initiator Q", init.left), ("initiator R", init.right)] {
        for s in half {
            if !table.contains(s) {
                out.push(Diagnostic::UnknownSymbol {
                    context: label.to_string(),
                    base: s.base(),
                });
            }
        }
    }
    if !init.site().is_valid() {
        out.push(Diagnostic::InvalidInitiator(system.render_site(&init.site())));
    }

    let mut seen: FxHashMap<([Symbol; 4], Sign), usize> = FxHashMap::default();
    for (i, m) in system.monomers().iter().enumerate() {
        for s in m.quad {
            if !table.contains(s) {
                out.push(Diagnostic::UnknownSymbol {
                    context: format!("monomer {i}"),
                    base: s.base(),
                });
            }
        }
        if m.concentration.is_zero() {
            out.push(Diagnostic::NonPositiveConcentration { monomer: i });
        }
        if let Some(&first) = seen.get(&m.key()) {
            out.push(Diagnostic::DuplicateMonomer { first, second: i });
        } else {
            seen.insert(m.key(), i);
        }
    }

    let sum = sum_concentrations(system.monomers());
    let (tn, td) = CONCENTRATION_TOLERANCE;
    let limit = BigRational::new(BigInt::from(td + tn), BigInt::from(td));
    if sum > limit {
        out.push(Diagnostic::ConcentrationSum(big_to_f64(&sum)));
    }
    out
}

/// Builds a system, merging monomers that repeat a `(quad, sign)` type.
/// The first occurrence's concentration wins.
#[derive(Clone, Debug, Default)]
pub struct SystemBuilder {
    pub symbols: SymbolTable,
    monomers: Vec<Monomer>,
    seen: FxHashSet<([Symbol; 4], Sign)>,
}

impl SystemBuilder {
    pub fn new(symbols: SymbolTable) -> Self {
        SystemBuilder {
            symbols,
            ..Default::default()
        }
    }

    /// Returns false when the type was already present.
    pub fn push(&mut self, monomer: Monomer) -> bool {
        if self.seen.insert(monomer.key()) {
            self.monomers.push(monomer);
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.monomers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomers.is_empty()
    }

    pub fn monomers_mut(&mut self) -> &mut [Monomer] {
        &mut self.monomers
    }

    pub fn build(self, initiator: Initiator) -> InsertionSystem {
        InsertionSystem::new(self.symbols, self.monomers, initiator)
    }
}
