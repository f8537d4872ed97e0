use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

/// A set of roots, stored as indices into a datum's canonical root list.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSet(BTreeSet<usize>);

impl RootSet {
    pub fn new() -> Self {
        RootSet(BTreeSet::new())
    }

    pub fn insert(&mut self, i: usize) -> bool {
        self.0.insert(i)
    }

    pub fn remove(&mut self, i: usize) -> bool {
        self.0.remove(&i)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &RootSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &RootSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersection(&self, other: &RootSet) -> RootSet {
        RootSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn union(&self, other: &RootSet) -> RootSet {
        RootSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &RootSet) -> RootSet {
        RootSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn filter(&self, mut keep: impl FnMut(usize) -> bool) -> RootSet {
        RootSet(self.0.iter().copied().filter(|&i| keep(i)).collect())
    }

    pub fn map(&self, f: impl FnMut(usize) -> usize) -> RootSet {
        self.iter().map(f).collect()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for RootSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        RootSet(iter.into_iter().collect())
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}
