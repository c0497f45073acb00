use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use fixedbitset::FixedBitSet;

/// A set of feature ids drawn from a universe `0..universe`.
///
/// Iteration is always in ascending id order. Equality, hashing and ordering
/// depend on the members only; sets order by cardinality first and then
/// lexicographically by members.
#[derive(Clone)]
pub struct FeatureSet {
    bits: FixedBitSet,
}

impl FeatureSet {
    pub fn empty(universe: usize) -> Self {
        FeatureSet {
            bits: FixedBitSet::with_capacity(universe),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        FeatureSet { bits }
    }

    /// Builds a set from ids; panics if an id is outside the universe.
    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.bits.contains(id)
    }

    pub fn insert(&mut self, id: usize) {
        assert!(id < self.universe(), "feature id {id} outside universe");
        self.bits.insert(id);
    }

    pub fn remove(&mut self, id: usize) {
        if id < self.universe() {
            self.bits.set(id, false);
        }
    }

    pub fn with(&self, id: usize) -> Self {
        let mut s = self.clone();
        s.insert(id);
        s
    }

    pub fn without(&self, id: usize) -> Self {
        let mut s = self.clone();
        s.remove(id);
        s
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `universe ∖ self`.
    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        FeatureSet { bits }
    }

    pub fn is_subset(&self, other: &FeatureSet) -> bool {
        self.iter().all(|i| other.contains(i))
    }

    pub fn is_superset(&self, other: &FeatureSet) -> bool {
        other.is_subset(self)
    }

    pub fn intersects(&self, other: &FeatureSet) -> bool {
        self.iter().any(|i| other.contains(i))
    }

    pub fn union(&self, other: &FeatureSet) -> Self {
        let universe = self.universe().max(other.universe());
        FeatureSet::from_ids(universe, self.iter().chain(other.iter()))
    }
}

impl PartialEq for FeatureSet {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl Eq for FeatureSet {}

impl Hash for FeatureSet {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for i in self.iter() {
            i.hash(state);
        }
        self.len().hash(state);
    }
}

impl Ord for FeatureSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for FeatureSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_and_subset() {
        let s = FeatureSet::from_ids(5, [1, 3]);
        let c = s.complement();
        assert_eq!(c.to_vec(), vec![0, 2, 4]);
        assert!(!s.intersects(&c));
        assert!(s.is_subset(&FeatureSet::full(5)));
        assert!(FeatureSet::empty(5).is_subset(&s));
        assert!(!s.is_subset(&c));
    }

    #[test]
    fn ordering_is_cardinality_then_members() {
        let mut v = [FeatureSet::from_ids(4, [0, 1]),
            FeatureSet::from_ids(4, [3]),
            FeatureSet::from_ids(4, [0, 2]),
            FeatureSet::empty(4)];
        v.sort();
        let got: Vec<Vec<usize>> = v.iter().map(|s| s.to_vec()).collect();
        assert_eq!(got, vec![vec![], vec![3], vec![0, 1], vec![0, 2]]);
    }

    #[test]
    fn equality_ignores_universe() {
        assert_eq!(FeatureSet::from_ids(3, [1]), FeatureSet::from_ids(8, [1]));
    }
}
