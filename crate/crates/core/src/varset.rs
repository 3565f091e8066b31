use std::fmt;

/// A set of variable (or vertex) positions, stored as a 64-bit mask.
///
/// Positions refer to the index of a variable in its [`Schema`](crate::Schema)
/// or of a vertex in its [`UndirectedGraph`](crate::UndirectedGraph).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VarSet(pub u64);

impl VarSet {
    pub const EMPTY: VarSet = VarSet(0);
    pub const CAPACITY: usize = 64;

    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < Self::CAPACITY);
        VarSet(1 << i)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        if n >= Self::CAPACITY {
            VarSet(u64::MAX)
        } else {
            VarSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(VarSet::EMPTY, |s, i| s.with(i))
    }

    pub fn with(self, i: usize) -> Self {
        VarSet(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Self {
        VarSet(self.0 & !(1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && self.0 & (1 << i) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: VarSet) -> Self {
        VarSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VarSet) -> Self {
        VarSet(self.0 & other.0)
    }

    pub fn difference(self, other: VarSet) -> Self {
        VarSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: VarSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: VarSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn first(self) -> Option<usize> {
        (!self.is_empty()).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// Re-index `self` relative to `within`: the k-th member of `within`
    /// becomes position k. Members of `self` outside `within` are dropped.
    pub fn compress(self, within: VarSet) -> VarSet {
        within
            .iter()
            .enumerate()
            .filter(|&(_, i)| self.contains(i))
            .fold(VarSet::EMPTY, |s, (k, _)| s.with(k))
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = VarSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some(cur.wrapping_sub(full) & full)
            };
            Some(VarSet(cur))
        })
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VarSet::from_indices(iter)
    }
}
