use std::fmt;

use rustc_hash::FxHashMap;

/// An interned symbol with a complement bit.
///
/// The low bit carries the star; the remaining bits index the owning
/// [`SymbolTable`]. Complementation is a single xor.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(u32);

impl Symbol {
    pub const fn new(base: u32, starred: bool) -> Self {
        Symbol((base << 1) | starred as u32)
    }

    pub const fn plain(base: u32) -> Self {
        Symbol::new(base, false)
    }

    pub const fn starred(base: u32) -> Self {
        Symbol::new(base, true)
    }

    pub const fn base(self) -> u32 {
        self.0 >> 1
    }

    pub const fn is_starred(self) -> bool {
        self.0 & 1 == 1
    }

    #[inline]
    pub const fn complement(self) -> Self {
        Symbol(self.0 ^ 1)
    }

    /// Raw packed value, stable for hashing and keys.
    #[inline]
    pub const fn raw(self) -> u32 {
        self.0
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}{}", self.base(), if self.is_starred() { "*" } else { "" })
    }
}

/// Names for symbol bases. Starred forms are never stored; they are rendered
/// with a `*` suffix.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    names: Vec<String>,
    index: FxHashMap<String, u32>,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut table = Self::new();
        for name in names {
            table.intern(name);
        }
        table
    }

    /// Returns the unstarred symbol for `name`, adding it if absent.
    pub fn intern(&mut self, name: impl Into<String>) -> Symbol {
        let name = name.into();
        debug_assert!(!name.ends_with('*'), "base names carry no star");
        if let Some(&base) = self.index.get(&name) {
            return Symbol::plain(base);
        }
        let base = self.names.len() as u32;
        self.index.insert(name.clone(), base);
        self.names.push(name);
        Symbol::plain(base)
    }

    pub fn get(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).map(|&b| Symbol::plain(b))
    }

    /// Resolves `name` or `name*`.
    pub fn resolve(&self, token: &str) -> Option<Symbol> {
        match token.strip_suffix('*') {
            Some(base) => self.get(base).map(Symbol::complement),
            None => self.get(token),
        }
    }

    pub fn contains(&self, symbol: Symbol) -> bool {
        (symbol.base() as usize) < self.names.len()
    }

    pub fn name(&self, base: u32) -> &str {
        &self.names[base as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Renders a symbol as `name` or `name*`.
    pub fn render(&self, symbol: Symbol) -> String {
        let name = self
            .names
            .get(symbol.base() as usize)
            .map(String::as_str)
            .unwrap_or("?");
        if symbol.is_starred() {
            format!("{name}*")
        } else {
            name.to_string()
        }
    }

    pub fn render_all(&self, symbols: &[Symbol]) -> Vec<String> {
        symbols.iter().map(|&s| self.render(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complement_toggles_star() {
        let mut t = SymbolTable::new();
        let a = t.intern("a");
        assert!(!a.is_starred());
        assert!(a.complement().is_starred());
        assert_eq!(t.render(a.complement()), "a*");
        assert_eq!(a.complement().complement(), a);
        assert_eq!(t.resolve("a*"), Some(a.complement()));
        assert_eq!(t.resolve("b"), None);
    }

    #[test]
    fn intern_is_idempotent() {
        let mut t = SymbolTable::new();
        let a = t.intern("a");
        let b = t.intern("b");
        assert_ne!(a, b);
        assert_eq!(t.intern("a"), a);
        assert_eq!(t.len(), 2);
    }

    proptest! {
        #[test]
        fn complement_is_an_involution(base in 0u32..1 << 20, star: bool) {
            let s = Symbol::new(base, star);
            prop_assert_eq!(s.complement().complement(), s);
            prop_assert_ne!(s.complement(), s);
            prop_assert_eq!(s.complement().base(), s.base());
        }
    }
}
