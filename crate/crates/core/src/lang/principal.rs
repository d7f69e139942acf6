use alloc::collections::btree_set::{self, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A party identifier. Names are case-sensitive and ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Principal(String);

impl Principal {
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        debug_assert!(!name.is_empty(), "principal names are non-empty");
        Principal(name)
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Principal {
    fn from(name: &str) -> Self {
        Principal::new(name)
    }
}

/// A duplicate-free set of principals, iterated in canonical order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrinSet(BTreeSet<Principal>);

impl PrinSet {
    pub fn new() -> Self {
        PrinSet(BTreeSet::new())
    }

    pub fn singleton(p: Principal) -> Self {
        let mut s = BTreeSet::new();
        s.insert(p);
        PrinSet(s)
    }

    /// Builds a set from names, e.g. `PrinSet::of(&["a", "b"])`.
    pub fn of(names: &[&str]) -> Self {
        names.iter().map(|n| Principal::new(*n)).collect()
    }

    pub fn contains(&self, p: &Principal) -> bool {
        self.0.contains(p)
    }

    pub fn is_subset(&self, other: &PrinSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &PrinSet) -> bool {
        self.0.iter().any(|p| other.contains(p))
    }

    pub fn intersection(&self, other: &PrinSet) -> PrinSet {
        PrinSet(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn insert(&mut self, p: Principal) -> bool {
        self.0.insert(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> btree_set::Iter<'_, Principal> {
        self.0.iter()
    }

    /// The canonically smallest member.
    pub fn first(&self) -> Option<&Principal> {
        self.0.first()
    }

    /// The canonically largest member.
    pub fn last(&self) -> Option<&Principal> {
        self.0.last()
    }

    pub fn to_vec(&self) -> Vec<Principal> {
        self.0.iter().cloned().collect()
    }
}

impl FromIterator<Principal> for PrinSet {
    fn from_iter<I: IntoIterator<Item = Principal>>(iter: I) -> Self {
        PrinSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a PrinSet {
    type Item = &'a Principal;
    type IntoIter = btree_set::Iter<'a, Principal>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for PrinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("}")
    }
}
