use fixedbitset::FixedBitSet;

/// A set of record indices over a dataset of fixed size.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Extent(FixedBitSet);

impl Extent {
    pub fn empty(universe: usize) -> Self {
        Extent(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Extent(bits)
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        for i in indices {
            bits.insert(i);
        }
        Extent(bits)
    }

    /// Size of the record universe this extent ranges over.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    /// Number of records in the extent.
    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn contains(&self, record: usize) -> bool {
        self.0.contains(record)
    }

    pub fn insert(&mut self, record: usize) {
        self.0.insert(record);
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn intersect_with(&mut self, other: &Extent) {
        self.0.intersect_with(&other.0);
    }

    pub fn union_with(&mut self, other: &Extent) {
        self.0.union_with(&other.0);
    }

    pub fn intersection(&self, other: &Extent) -> Extent {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn union(&self, other: &Extent) -> Extent {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn complement(&self) -> Extent {
        let mut out = self.clone();
        out.0.toggle_range(..);
        out
    }

    pub fn intersection_len(&self, other: &Extent) -> usize {
        self.0.intersection_count(&other.0)
    }

    pub fn intersects(&self, other: &Extent) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &Extent) -> bool {
        self.0.is_subset(&other.0)
    }
}
