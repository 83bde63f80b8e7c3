//! Points and subsets of a finite ground set.

use std::fmt;

/// Absolute upper bound on ground-set size. Tables are indexed by `u32` masks
/// and every enumeration is exponential, so this is never raised at runtime.
pub const HARD_MAX_POINTS: usize = 16;

/// Default working cap used by operations that accept a configurable limit.
pub const DEFAULT_MAX_POINTS: usize = 12;

/// Index of a point in its ground set (`0..n`).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
pub struct PointId(pub usize);

impl PointId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Membership bit vector over a ground set of at most [`HARD_MAX_POINTS`] points.
///
/// Bit `i` is set when point `i` belongs to the subset. The width is carried by
/// the owning table, not by the key.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SubsetKey(pub u32);

/// Serialized as the ascending list of point indices.
impl serde::Serialize for SubsetKey {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|p| p.0))
    }
}

impl SubsetKey {
    pub const EMPTY: SubsetKey = SubsetKey(0);

    pub fn full(n: usize) -> SubsetKey {
        debug_assert!(n <= 31);
        SubsetKey(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(p: PointId) -> SubsetKey {
        SubsetKey(1 << p.0)
    }

    pub fn from_points<I: IntoIterator<Item = PointId>>(points: I) -> SubsetKey {
        points.into_iter().fold(SubsetKey::EMPTY, |s, p| s.with(p))
    }

    pub fn from_indices(indices: &[usize]) -> SubsetKey {
        SubsetKey::from_points(indices.iter().map(|&i| PointId(i)))
    }

    #[inline]
    pub fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn contains(self, p: PointId) -> bool {
        self.0 >> p.0 & 1 == 1
    }

    #[inline]
    pub fn with(self, p: PointId) -> SubsetKey {
        SubsetKey(self.0 | 1 << p.0)
    }

    #[inline]
    pub fn without(self, p: PointId) -> SubsetKey {
        SubsetKey(self.0 & !(1 << p.0))
    }

    #[inline]
    pub fn union(self, other: SubsetKey) -> SubsetKey {
        SubsetKey(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: SubsetKey) -> SubsetKey {
        SubsetKey(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: SubsetKey) -> SubsetKey {
        SubsetKey(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: SubsetKey) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn intersects(self, other: SubsetKey) -> bool {
        self.0 & other.0 != 0
    }

    /// Lowest member, if any.
    pub fn first(self) -> Option<PointId> {
        (self.0 != 0).then(|| PointId(self.0.trailing_zeros() as usize))
    }

    /// Members in ascending index order.
    pub fn iter(self) -> Points {
        Points(self.0)
    }

    /// All subsets of `self` (including `∅` and `self`), in ascending mask order.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(0) }
    }

    /// Position-compress `self` onto the members of `within` (bit extract).
    ///
    /// Point `within`'s k-th member maps to local index k. Members of `self`
    /// outside `within` are dropped.
    pub fn compress(self, within: SubsetKey) -> SubsetKey {
        let mut out = 0u32;
        for (k, p) in within.iter().enumerate() {
            if self.contains(p) {
                out |= 1 << k;
            }
        }
        SubsetKey(out)
    }

    /// Inverse of [`compress`](Self::compress): local index k becomes the k-th member of `within`.
    pub fn expand(self, within: SubsetKey) -> SubsetKey {
        let mut out = 0u32;
        for (k, p) in within.iter().enumerate() {
            if self.0 >> k & 1 == 1 {
                out |= 1 << p.0;
            }
        }
        SubsetKey(out)
    }

    /// Member indices, ascending.
    pub fn indices(self) -> Vec<usize> {
        self.iter().map(PointId::index).collect()
    }
}

impl fmt::Debug for SubsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|p| p.0)).finish()
    }
}

/// Iterator over members of a [`SubsetKey`].
#[derive(Clone)]
pub struct Points(u32);

impl Iterator for Points {
    type Item = PointId;

    fn next(&mut self) -> Option<PointId> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(PointId(i as usize))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Points {}

/// Iterator over all submasks of a mask, ascending.
#[derive(Clone)]
pub struct Subsets {
    mask: u32,
    next: Option<u32>,
}

impl Iterator for Subsets {
    type Item = SubsetKey;

    fn next(&mut self) -> Option<SubsetKey> {
        let cur = self.next?;
        // standard trick: next submask above `cur` within `mask`
        self.next = if cur == self.mask { None } else { Some(((cur | !self.mask).wrapping_add(1)) & self.mask) };
        Some(SubsetKey(cur))
    }
}

/// All subsets of an `n`-point ground set, ascending by mask.
pub fn all_subsets(n: usize) -> impl Iterator<Item = SubsetKey> + Clone {
    (0..(1u32 << n)).map(SubsetKey)
}

/// Nonempty subsets ordered by descending cardinality, lexicographic (by
/// ascending member indices) within a cardinality. Every superset of a set
/// precedes it.
pub fn superset_first_order(n: usize) -> Vec<SubsetKey> {
    let mut v: Vec<SubsetKey> = all_subsets(n).filter(|s| !s.is_empty()).collect();
    v.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.indices().cmp(&b.indices())));
    v
}
