//! Subsets of a small index universe stored as bitmasks.
//!
//! Element `i` (zero-based) is bit `i`. All user-facing renderings are
//! one-based, matching the usual `{1, ..., n}` indexing.

use std::fmt;

use serde::{Serialize, Serializer};

/// Largest universe a [`Subset`] can address.
pub const MAX_UNIVERSE: usize = 63;

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// The full set `{0, ..., universe - 1}`.
    pub fn full(universe: usize) -> Self {
        debug_assert!(universe <= MAX_UNIVERSE);
        Subset((1u64 << universe) - 1)
    }

    /// Builds a subset from zero-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Subset(indices.into_iter().fold(0, |acc, i| acc | (1u64 << i)))
    }

    /// Builds a subset from one-based indices; zero is ignored.
    pub fn from_one_based<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self::from_indices(indices.into_iter().filter(|&i| i > 0).map(|i| i - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u64 << i;
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn complement(self, universe: usize) -> Subset {
        Subset(!self.0 & Self::full(universe).0)
    }

    /// Nonempty and strictly smaller than the universe.
    pub fn is_proper_nonempty(self, universe: usize) -> bool {
        !self.is_empty() && self.0 & !Self::full(universe).0 == 0 && self != Self::full(universe)
    }

    /// Zero-based indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Indicator vector of length `universe`.
    pub fn indicator(self, universe: usize) -> Vec<u8> {
        (0..universe).map(|i| self.contains(i) as u8).collect()
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.one_based()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.one_based().serialize(serializer)
    }
}

/// All nonempty proper subsets of `{0, ..., universe - 1}` in increasing bit order.
pub fn proper_subsets(universe: usize) -> impl Iterator<Item = Subset> {
    let top = if universe == 0 { 0 } else { (1u64 << universe) - 1 };
    (1..top).map(Subset)
}

/// Binomial coefficient, exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// `C(n, ceil(n/2))`, the width of the Boolean lattice on `n` points.
pub fn central_binomial(n: usize) -> u64 {
    binomial(n, n.div_ceil(2))
}
