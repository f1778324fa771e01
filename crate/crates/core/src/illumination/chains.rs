//! Symmetric chain decompositions of the Boolean lattice `{0,1}^d`.
//!
//! Built with the bracketing construction: read a 0 as an opening bracket and
//! a 1 as a closing one, match greedily, and group strings that share their
//! matched pairs. Within a group the unmatched positions read `1...10...0`,
//! and flipping the leftmost unmatched 0 walks up the chain one rank at a time.

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{central_binomial, Subset};

/// Largest `d` accepted by [`symmetric_chain_decomposition`].
pub const MAX_CHAIN_DIM: usize = 24;

/// A strictly increasing chain in `({0,1}^d, <=)`, elements stored as subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetChain {
    dim: usize,
    elements: Vec<Subset>,
}

impl SubsetChain {
    pub fn new(dim: usize, elements: Vec<Subset>) -> Result<Self> {
        let full = Subset::full(dim);
        if let Some(e) = elements.iter().find(|e| !e.is_subset_of(full)) {
            return Err(Error::NotAChain(format!("{e} is not a subset of {{1..{dim}}}")));
        }
        for w in elements.windows(2) {
            if !(w[0].is_subset_of(w[1]) && w[0] != w[1]) {
                return Err(Error::NotAChain(format!("{} is not strictly below {}", w[0], w[1])));
            }
        }
        Ok(SubsetChain { dim, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[Subset] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Saturated (each step adds one element) and rank-symmetric
    /// (bottom rank + top rank = d).
    pub fn is_symmetric(&self) -> bool {
        let (Some(first), Some(last)) = (self.elements.first(), self.elements.last()) else {
            return false;
        };
        let saturated = self.elements.windows(2).all(|w| w[0].len() + 1 == w[1].len());
        saturated && first.len() + last.len() == self.dim
    }

    /// Indicator vectors, bottom to top.
    pub fn vectors(&self) -> Vec<Vec<u8>> {
        self.elements.iter().map(|e| e.indicator(self.dim)).collect()
    }
}

impl Serialize for SubsetChain {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.elements.len()))?;
        for e in &self.elements {
            seq.serialize_element(&e.indicator(self.dim))?;
        }
        seq.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainDecomposition {
    pub dim: usize,
    pub chains: Vec<SubsetChain>,
}

impl ChainDecomposition {
    /// Every vertex of `{0,1}^d` lies in exactly one chain.
    pub fn is_partition(&self) -> bool {
        let size = 1usize << self.dim;
        let mut seen = vec![false; size];
        for chain in &self.chains {
            for e in chain.elements() {
                let b = e.bits() as usize;
                if b >= size || seen[b] {
                    return false;
                }
                seen[b] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn all_symmetric(&self) -> bool {
        self.chains.iter().all(SubsetChain::is_symmetric)
    }
}

/// Partition of `{0,1}^d` into `C(d, ceil(d/2))` symmetric chains, ordered by
/// the bitmask of their bottom element.
pub fn symmetric_chain_decomposition(d: usize) -> Result<ChainDecomposition> {
    if !(1..=MAX_CHAIN_DIM).contains(&d) {
        return Err(Error::OutOfRange {
            what: "chain dimension d",
            value: d,
            min: 1,
            max: MAX_CHAIN_DIM,
        });
    }
    let mut chains = Vec::with_capacity(central_binomial(d) as usize);
    let mut open = Vec::with_capacity(d);
    for bits in 0u64..(1u64 << d) {
        open.clear();
        let mut is_bottom = true;
        for i in 0..d {
            if bits & (1 << i) == 0 {
                open.push(i);
            } else if open.pop().is_none() {
                // unmatched closing bracket: not the bottom of its chain
                is_bottom = false;
                break;
            }
        }
        if !is_bottom {
            continue;
        }
        let mut current = Subset::from_bits(bits);
        let mut elements = Vec::with_capacity(open.len() + 1);
        elements.push(current);
        for &i in &open {
            current.insert(i);
            elements.push(current);
        }
        chains.push(SubsetChain { dim: d, elements });
    }
    debug_assert_eq!(chains.len() as u64, central_binomial(d));
    Ok(ChainDecomposition { dim: d, chains })
}
