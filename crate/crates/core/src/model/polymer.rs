use super::site::{InsertionSite, Site};
use super::symbol::Symbol;
use super::system::{Initiator, InsertionSystem, MonomerId};
use super::ModelError;

/// `Q m1 ... mn R`. Monomers are referenced by id into the owning system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polymer {
    initiator: InitiatorKey,
    chain: Vec<MonomerId>,
}

// Initiator is not Ord; polymers only need a total order for sorted output.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct InitiatorKey([Symbol; 4]);

impl From<Initiator> for InitiatorKey {
    fn from(i: Initiator) -> Self {
        InitiatorKey([i.left[0], i.left[1], i.right[0], i.right[1]])
    }
}

impl Polymer {
    /// The bare initiator of `system`.
    pub fn initial(system: &InsertionSystem) -> Self {
        Polymer {
            initiator: system.initiator().into(),
            chain: Vec::new(),
        }
    }

    /// A polymer with the given chain. Adjacency is not checked here; see
    /// [`Polymer::check_adjacency`].
    pub fn from_chain(system: &InsertionSystem, chain: Vec<MonomerId>) -> Self {
        Polymer {
            initiator: system.initiator().into(),
            chain,
        }
    }

    pub fn initiator(&self) -> Initiator {
        let [a, b, c, d] = self.initiator.0;
        Initiator::new_unchecked([a, b], [c, d])
    }

    pub fn chain(&self) -> &[MonomerId] {
        &self.chain
    }

    pub fn into_chain(self) -> Vec<MonomerId> {
        self.chain
    }

    /// Unit count, initiator halves included.
    pub fn len(&self) -> usize {
        self.chain.len() + 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn gap_count(&self) -> usize {
        self.chain.len() + 1
    }

    pub fn site_at(&self, system: &InsertionSystem, gap: usize) -> Result<Site, ModelError> {
        let n = self.chain.len();
        if gap > n {
            return Err(ModelError::GapOutOfRange { gap, gaps: n + 1 });
        }
        let init = self.initiator();
        let left = if gap == 0 {
            init.left
        } else {
            system.monomer(self.chain[gap - 1]).right_half()
        };
        let right = if gap == n {
            init.right
        } else {
            system.monomer(self.chain[gap]).left_half()
        };
        Ok(Site::new(left, right))
    }

    /// One site per gap, left to right.
    pub fn sites(&self, system: &InsertionSystem) -> Vec<InsertionSite> {
        (0..self.gap_count())
            .map(|gap| InsertionSite {
                site: self.site_at(system, gap).expect("gap in range"),
                gap,
            })
            .collect()
    }

    /// Every admissible `(gap, monomer)` pair, ordered by gap then id.
    pub fn admissible_pairs(&self, system: &InsertionSystem) -> Vec<(usize, MonomerId)> {
        let mut out = Vec::new();
        for s in self.sites(system) {
            for &m in system.candidates(&s.site) {
                out.push((s.gap, m));
            }
        }
        out
    }

    pub fn is_terminal(&self, system: &InsertionSystem) -> bool {
        self.sites(system)
            .iter()
            .all(|s| system.candidates(&s.site).is_empty())
    }

    /// Splices `monomer` into `gap`, failing if the site does not admit it.
    pub fn insert(
        &self,
        system: &InsertionSystem,
        gap: usize,
        monomer: MonomerId,
    ) -> Result<Polymer, ModelError> {
        let site = self.site_at(system, gap)?;
        if (monomer as usize) >= system.size() {
            return Err(ModelError::UnknownMonomer(monomer));
        }
        if !site.admits(system.monomer(monomer)) {
            return Err(ModelError::Inadmissible {
                site: system.render_site(&site),
                monomer: system.render_monomer(monomer),
            });
        }
        let mut chain = Vec::with_capacity(self.chain.len() + 1);
        chain.extend_from_slice(&self.chain[..gap]);
        chain.push(monomer);
        chain.extend_from_slice(&self.chain[gap..]);
        Ok(Polymer {
            initiator: self.initiator,
            chain,
        })
    }

    /// Left-to-right symbols: Q, each monomer's quadruple, R.
    pub fn string_repr(&self, system: &InsertionSystem) -> Vec<Symbol> {
        let init = self.initiator();
        let mut out = Vec::with_capacity(4 * self.chain.len() + 4);
        out.extend_from_slice(&init.left);
        for &m in &self.chain {
            out.extend_from_slice(&system.monomer(m).quad);
        }
        out.extend_from_slice(&init.right);
        out
    }

    pub fn render(&self, system: &InsertionSystem) -> String {
        system.symbols().render_all(&self.string_repr(system)).join(" ")
    }

    /// Confirms every gap satisfies the adjacency condition.
    pub fn check_adjacency(&self, system: &InsertionSystem) -> Result<(), ModelError> {
        for s in self.sites(system) {
            if !s.site.is_valid() {
                return Err(ModelError::InvalidSite(s.site));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::monomer::{Concentration, Monomer, Sign};
    use crate::model::site::SiteKind;
    use crate::model::symbol::SymbolTable;

    fn paper_example() -> InsertionSystem {
        let mut t = SymbolTable::from_names(["a", "b", "c", "d"]);
        let r = |t: &mut SymbolTable, s: &str| t.resolve(s).unwrap();
        let quad = [r(&mut t, "b*"), r(&mut t, "a"), r(&mut t, "d"), r(&mut t, "c")];
        let q = [r(&mut t, "a"), r(&mut t, "b")];
        let rr = [r(&mut t, "c*"), r(&mut t, "a")];
        let m = Monomer::new(quad, Sign::Positive, Concentration::fraction(1, 1));
        InsertionSystem::new(t, vec![m], Initiator::new_unchecked(q, rr))
    }

    #[test]
    fn string_representation_of_textbook_polymer() {
        let sys = paper_example();
        let p = Polymer::from_chain(&sys, vec![0]);
        assert_eq!(p.render(&sys), "a b b* a d c c* a");
        assert_eq!(p.string_repr(&sys).len(), 4 * 1 + 4);
        assert_eq!(p.len(), 3);
    }

    #[test]
    fn bare_initiator_has_one_site() {
        let sys = paper_example();
        let p = Polymer::initial(&sys);
        let sites = p.sites(&sys);
        assert_eq!(sites.len(), 1);
        assert_eq!(sites[0].site, sys.initiator().site());
        assert_eq!(p.string_repr(&sys).len(), 4);
    }

    #[test]
    fn gap_out_of_range() {
        let sys = paper_example();
        let p = Polymer::initial(&sys);
        assert!(matches!(
            p.insert(&sys, 3, 0),
            Err(ModelError::GapOutOfRange { gap: 3, gaps: 1 })
        ));
        assert!(matches!(p.insert(&sys, 0, 7), Err(ModelError::UnknownMonomer(7))));
    }

    #[test]
    fn insertion_into_textbook_site() {
        // (a, b)(c*, a): a* != a so not positive; b* == c*? no -> invalid site.
        let sys = paper_example();
        let site = Polymer::initial(&sys).site_at(&sys, 0).unwrap();
        assert!(site.classify().is_err());
        assert_eq!(
            Polymer::from_chain(&sys, vec![0]).sites(&sys)[0].site.classify().unwrap(),
            SiteKind::Negative
        );
    }
}
