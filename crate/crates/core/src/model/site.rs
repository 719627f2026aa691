use std::fmt;

use super::monomer::{Monomer, Sign};
use super::symbol::{Symbol, SymbolTable};
use super::ModelError;

/// The symbols flanking a gap: `(a, b)(c, d)`, where `(a, b)` is the right
/// half of the unit to the left and `(c, d)` the left half of the unit to
/// the right.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    pub left: [Symbol; 2],
    pub right: [Symbol; 2],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SiteKind {
    Positive,
    Negative,
    Dead,
}

impl SiteKind {
    pub fn sign(self) -> Option<Sign> {
        match self {
            SiteKind::Positive => Some(Sign::Positive),
            SiteKind::Negative => Some(Sign::Negative),
            SiteKind::Dead => None,
        }
    }
}

impl Site {
    pub const fn new(left: [Symbol; 2], right: [Symbol; 2]) -> Self {
        Site { left, right }
    }

    fn outer_match(&self) -> bool {
        self.left[0].complement() == self.right[1]
    }

    fn inner_match(&self) -> bool {
        self.left[1].complement() == self.right[0]
    }

    /// The adjacency condition every polymer gap satisfies.
    pub fn is_valid(&self) -> bool {
        self.outer_match() || self.inner_match()
    }

    pub fn classify(&self) -> Result<SiteKind, ModelError> {
        match (self.outer_match(), self.inner_match()) {
            (true, false) => Ok(SiteKind::Positive),
            (false, true) => Ok(SiteKind::Negative),
            (true, true) => Ok(SiteKind::Dead),
            (false, false) => Err(ModelError::InvalidSite(*self)),
        }
    }

    /// The symbol pair a monomer must carry to fit, together with the sign.
    ///
    /// Positive sites need `(b*, _, _, c*)+`, keyed by first and fourth
    /// symbols; negative sites need `(_, a*, d*, _)-`, keyed by second and
    /// third.
    pub fn required_key(&self) -> Option<(Sign, [Symbol; 2])> {
        match self.classify().ok()? {
            SiteKind::Positive => Some((
                Sign::Positive,
                [self.left[1].complement(), self.right[0].complement()],
            )),
            SiteKind::Negative => Some((
                Sign::Negative,
                [self.left[0].complement(), self.right[1].complement()],
            )),
            SiteKind::Dead => None,
        }
    }

    pub fn admits(&self, monomer: &Monomer) -> bool {
        match self.required_key() {
            Some((sign, key)) => sign == monomer.sign && key == monomer_key(monomer),
            None => false,
        }
    }

    /// The two sites produced by splicing `monomer` into this gap.
    pub fn split(&self, monomer: &Monomer) -> (Site, Site) {
        (
            Site::new(self.left, monomer.left_half()),
            Site::new(monomer.right_half(), self.right),
        )
    }

    pub fn render(&self, table: &SymbolTable) -> String {
        format!(
            "({}, {})({}, {})",
            table.render(self.left[0]),
            table.render(self.left[1]),
            table.render(self.right[0]),
            table.render(self.right[1])
        )
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({:?}, {:?})({:?}, {:?})",
            self.left[0], self.left[1], self.right[0], self.right[1]
        )
    }
}

/// The symbols a site inspects on a monomer of matching sign.
pub(crate) fn monomer_key(m: &Monomer) -> [Symbol; 2] {
    match m.sign {
        Sign::Positive => [m.quad[0], m.quad[3]],
        Sign::Negative => [m.quad[1], m.quad[2]],
    }
}

/// A site at a concrete gap of a polymer. Gap `i` lies after the `i`-th
/// unit, so gap 0 sits right after the left initiator half.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct InsertionSite {
    pub site: Site,
    pub gap: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::monomer::Concentration;

    fn table() -> SymbolTable {
        SymbolTable::from_names(["u", "s0", "s1", "s2", "a", "b", "x"])
    }

    fn sym(t: &SymbolTable, s: &str) -> Symbol {
        t.resolve(s).unwrap()
    }

    fn site(t: &SymbolTable, s: [&str; 4]) -> Site {
        Site::new([sym(t, s[0]), sym(t, s[1])], [sym(t, s[2]), sym(t, s[3])])
    }

    fn mono(t: &SymbolTable, s: [&str; 4], sign: Sign) -> Monomer {
        Monomer::new(s.map(|x| sym(t, x)), sign, Concentration::fraction(1, 2))
    }

    #[test]
    fn classification_matches_insertion_rules() {
        let t = table();
        assert_eq!(site(&t, ["u", "s0", "s0", "u*"]).classify().unwrap(), SiteKind::Positive);
        assert_eq!(
            site(&t, ["s2*", "s0*", "s0", "u*"]).classify().unwrap(),
            SiteKind::Negative
        );
        assert_eq!(site(&t, ["a", "b", "b*", "a*"]).classify().unwrap(), SiteKind::Dead);
        assert!(matches!(
            site(&t, ["a", "b", "a", "b"]).classify(),
            Err(ModelError::InvalidSite(_))
        ));
    }

    #[test]
    fn admissibility() {
        let t = table();
        let s = site(&t, ["u", "s0", "s0", "u*"]);
        assert!(s.admits(&mono(&t, ["s0*", "s1", "s2*", "s0*"], Sign::Positive)));
        assert!(!s.admits(&mono(&t, ["s0*", "s1", "s2*", "s0*"], Sign::Negative)));
        assert!(!s.admits(&mono(&t, ["s1*", "s1", "s2*", "s0*"], Sign::Positive)));
        let dead = site(&t, ["a", "b", "b*", "a*"]);
        for sign in [Sign::Positive, Sign::Negative] {
            assert!(!dead.admits(&mono(&t, ["b*", "x", "x", "b"], sign)));
            assert!(!dead.admits(&mono(&t, ["x", "a*", "a", "x"], sign)));
        }
        // negative site (s2*, s0*)(s0, u*) wants (_, s2, u, _)-
        let neg = site(&t, ["s2*", "s0*", "s0", "u*"]);
        assert!(neg.admits(&mono(&t, ["x", "s2", "u", "s2"], Sign::Negative)));
    }

    #[test]
    fn split_produces_flanking_sites() {
        let t = table();
        let s = site(&t, ["u", "s0", "s0", "u*"]);
        let m = mono(&t, ["s0*", "s1", "s2*", "s0*"], Sign::Positive);
        let (l, r) = s.split(&m);
        assert_eq!(l, site(&t, ["u", "s0", "s0*", "s1"]));
        assert_eq!(r, site(&t, ["s2*", "s0*", "s0", "u*"]));
        assert!(l.is_valid() && r.is_valid());
    }
}
