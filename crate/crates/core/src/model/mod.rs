//! The insertion-system object model: symbols, monomers, sites, polymers.

mod monomer;
mod polymer;
mod site;
pub mod site_graph;
mod symbol;
mod system;

pub use monomer::{Concentration, ConcentrationParseError, Monomer, Notation, Sign};
pub use polymer::Polymer;
pub use site::{InsertionSite, Site, SiteKind};
pub use site_graph::SiteGraph;
pub use symbol::{Symbol, SymbolTable};
pub use system::{
    validate, Diagnostic, Initiator, InsertionSystem, MonomerId, SystemBuilder,
    CONCENTRATION_TOLERANCE,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("site {0:?} satisfies neither complement condition")]
    InvalidSite(Site),
    #[error("initiator site {0:?} satisfies neither complement condition")]
    InvalidInitiator(Site),
    #[error("gap {gap} out of range ({gaps} gaps)")]
    GapOutOfRange { gap: usize, gaps: usize },
    #[error("unknown monomer id {0}")]
    UnknownMonomer(MonomerId),
    #[error("monomer {monomer} is not admissible at {site}")]
    Inadmissible { site: String, monomer: String },
}

/// Filters the system's monomers by admissibility at `site`, in id order.
pub fn insertable(site: &Site, system: &InsertionSystem) -> Vec<Monomer> {
    system.insertable(site)
}
