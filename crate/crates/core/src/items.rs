//! Item sets and allocations.

use std::fmt;

use thiserror::Error;

/// Largest supported item universe. Keeps an [`ItemSet`] in one machine word.
pub const MAX_ITEMS: usize = 63;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ItemError {
    #[error("item universe of size {0} exceeds the supported maximum of {MAX_ITEMS}")]
    UniverseTooLarge(usize),
    #[error("item {item} is outside the universe of {m} items")]
    OutOfRange { item: usize, m: usize },
    #[error("item set over {found} items used with a universe of {expected} items")]
    UniverseMismatch { expected: usize, found: usize },
}

/// A subset of the items `0..m`, stored as a bitmask (item `i` is bit `i`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ItemSet {
    bits: u64,
    m: u8,
}

impl ItemSet {
    pub fn empty(m: usize) -> Self {
        assert!(m <= MAX_ITEMS, "universe too large");
        ItemSet { bits: 0, m: m as u8 }
    }

    /// The whole universe `{0, .., m-1}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_ITEMS, "universe too large");
        ItemSet {
            bits: Self::universe_mask(m),
            m: m as u8,
        }
    }

    pub fn singleton(m: usize, item: usize) -> Self {
        assert!(item < m, "item {item} out of range for universe {m}");
        ItemSet {
            bits: 1 << item,
            m: m as u8,
        }
    }

    pub fn from_bits(m: usize, bits: u64) -> Result<Self, ItemError> {
        if m > MAX_ITEMS {
            return Err(ItemError::UniverseTooLarge(m));
        }
        let stray = bits & !Self::universe_mask(m);
        if stray != 0 {
            return Err(ItemError::OutOfRange {
                item: stray.trailing_zeros() as usize,
                m,
            });
        }
        Ok(ItemSet { bits, m: m as u8 })
    }

    pub fn from_items<I: IntoIterator<Item = usize>>(m: usize, items: I) -> Result<Self, ItemError> {
        if m > MAX_ITEMS {
            return Err(ItemError::UniverseTooLarge(m));
        }
        let mut bits = 0u64;
        for item in items {
            if item >= m {
                return Err(ItemError::OutOfRange { item, m });
            }
            bits |= 1 << item;
        }
        Ok(ItemSet { bits, m: m as u8 })
    }

    fn universe_mask(m: usize) -> u64 {
        if m == 64 {
            u64::MAX
        } else {
            (1u64 << m) - 1
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Size of the universe this set lives in.
    pub fn universe(&self) -> usize {
        self.m as usize
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, item: usize) -> bool {
        item < self.universe() && self.bits >> item & 1 == 1
    }

    pub fn insert(&mut self, item: usize) {
        assert!(item < self.universe(), "item {item} out of range");
        self.bits |= 1 << item;
    }

    pub fn remove(&mut self, item: usize) {
        if item < self.universe() {
            self.bits &= !(1 << item);
        }
    }

    pub fn with(mut self, item: usize) -> Self {
        self.insert(item);
        self
    }

    pub fn without(mut self, item: usize) -> Self {
        self.remove(item);
        self
    }

    pub fn union(self, other: ItemSet) -> Self {
        debug_assert_eq!(self.m, other.m);
        ItemSet {
            bits: self.bits | other.bits,
            m: self.m,
        }
    }

    pub fn intersection(self, other: ItemSet) -> Self {
        debug_assert_eq!(self.m, other.m);
        ItemSet {
            bits: self.bits & other.bits,
            m: self.m,
        }
    }

    pub fn difference(self, other: ItemSet) -> Self {
        debug_assert_eq!(self.m, other.m);
        ItemSet {
            bits: self.bits & !other.bits,
            m: self.m,
        }
    }

    /// Complement within the universe.
    pub fn complement(self) -> Self {
        ItemSet {
            bits: !self.bits & Self::universe_mask(self.universe()),
            m: self.m,
        }
    }

    pub fn is_subset(&self, other: &ItemSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn is_disjoint(&self, other: &ItemSet) -> bool {
        self.bits & other.bits == 0
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        (self.bits != 0).then(|| self.bits.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Members {
        Members { bits: self.bits }
    }

    /// Every subset of `self` (including `∅` and `self`) in increasing bitmask order.
    pub fn subsets(&self) -> Subsets {
        Subsets {
            mask: self.bits,
            next: Some(0),
            m: self.m,
        }
    }

    /// Every subset of `self`, ordered by cardinality and then by bitmask.
    ///
    /// This is the canonical search order used by verifiers and tie-breaks.
    pub fn subsets_by_size(&self) -> Vec<ItemSet> {
        let mut all: Vec<ItemSet> = self.subsets().collect();
        all.sort_by_key(|s| (s.len(), s.bits));
        all
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, item) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{item}")?;
        }
        write!(f, "}}")
    }
}

pub struct Members {
    bits: u64,
}

impl Iterator for Members {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.bits == 0 {
            return None;
        }
        let item = self.bits.trailing_zeros() as usize;
        self.bits &= self.bits - 1;
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.bits.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Submask enumeration in increasing numeric order.
pub struct Subsets {
    mask: u64,
    next: Option<u64>,
    m: u8,
}

impl Iterator for Subsets {
    type Item = ItemSet;

    fn next(&mut self) -> Option<ItemSet> {
        let current = self.next?;
        self.next = if current == self.mask {
            None
        } else {
            // next submask in increasing order
            Some(((current | !self.mask).wrapping_add(1)) & self.mask)
        };
        Some(ItemSet {
            bits: current,
            m: self.m,
        })
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AllocationError {
    #[error("allocation needs at least one bundle")]
    NoBundles,
    #[error("bundle {agent} lives in a universe of {found} items, expected {expected}")]
    UniverseMismatch {
        agent: usize,
        expected: usize,
        found: usize,
    },
    #[error("item {item} is assigned to both agent {first} and agent {second}")]
    Overlap {
        item: usize,
        first: usize,
        second: usize,
    },
    #[error("items {missing} are not assigned to any agent")]
    Incomplete { missing: ItemSet },
    #[error("allocation has {found} bundles but the instance has {expected} agents")]
    AgentCount { expected: usize, found: usize },
}

/// A complete allocation: an ordered partition of the item universe, one bundle per agent.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Allocation {
    bundles: Vec<ItemSet>,
}

impl Allocation {
    /// Validates that `bundles` are pairwise disjoint and cover `0..m`.
    pub fn new(m: usize, bundles: Vec<ItemSet>) -> Result<Self, AllocationError> {
        if bundles.is_empty() {
            return Err(AllocationError::NoBundles);
        }
        let mut seen = ItemSet::empty(m);
        for (agent, bundle) in bundles.iter().enumerate() {
            if bundle.universe() != m {
                return Err(AllocationError::UniverseMismatch {
                    agent,
                    expected: m,
                    found: bundle.universe(),
                });
            }
            let clash = seen.intersection(*bundle);
            if let Some(item) = clash.first() {
                let first = bundles[..agent]
                    .iter()
                    .position(|b| b.contains(item))
                    .expect("overlapping item has an earlier owner");
                return Err(AllocationError::Overlap {
                    item,
                    first,
                    second: agent,
                });
            }
            seen = seen.union(*bundle);
        }
        let missing = seen.complement();
        if !missing.is_empty() {
            return Err(AllocationError::Incomplete { missing });
        }
        Ok(Allocation { bundles })
    }

    /// Builds an allocation from per-agent item lists.
    pub fn from_lists(m: usize, lists: &[Vec<usize>]) -> Result<Self, AllocationError> {
        let bundles = lists
            .iter()
            .enumerate()
            .map(|(agent, items)| {
                ItemSet::from_items(m, items.iter().copied()).map_err(|e| match e {
                    ItemError::OutOfRange { .. } | ItemError::UniverseTooLarge(_) => {
                        AllocationError::UniverseMismatch {
                            agent,
                            expected: m,
                            found: items.iter().copied().max().map_or(0, |x| x + 1),
                        }
                    }
                    ItemError::UniverseMismatch { .. } => unreachable!(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Allocation::new(m, bundles)
    }

    /// Agent `owner[i]` receives item `i`.
    pub fn from_owners(n: usize, m: usize, owners: &[usize]) -> Result<Self, AllocationError> {
        assert_eq!(owners.len(), m, "one owner per item");
        let mut bundles = vec![ItemSet::empty(m); n];
        for (item, &agent) in owners.iter().enumerate() {
            if agent >= n {
                return Err(AllocationError::AgentCount {
                    expected: n,
                    found: agent + 1,
                });
            }
            bundles[agent].insert(item);
        }
        Allocation::new(m, bundles)
    }

    pub fn bundles(&self) -> &[ItemSet] {
        &self.bundles
    }

    pub fn bundle(&self, agent: usize) -> ItemSet {
        self.bundles[agent]
    }

    pub fn agents(&self) -> usize {
        self.bundles.len()
    }

    pub fn universe(&self) -> usize {
        self.bundles[0].universe()
    }

    /// Reorders bundles so that new agent `k` holds old agent `perm[k]`'s bundle.
    pub fn permuted(&self, perm: &[usize]) -> Allocation {
        Allocation {
            bundles: perm.iter().map(|&k| self.bundles[k]).collect(),
        }
    }

    pub fn to_lists(&self) -> Vec<Vec<usize>> {
        self.bundles.iter().map(ItemSet::to_vec).collect()
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, b) in self.bundles.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}
