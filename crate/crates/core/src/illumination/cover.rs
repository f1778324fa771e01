//! Exact illumination numbers for small `n` by minimum set cover.
//!
//! Elements are the `2^n - 2` extreme points; candidate sets are the
//! illumination patterns of the `n!` canonical direction classes. The search
//! is a depth-first branch and bound that always branches on the uncovered
//! point with the fewest covering classes. Its lower bound is a greedy packing
//! of uncovered points no two of which share a covering class.

use serde::Serialize;

use super::classes::{canonical_classes, CanonicalClass};
use super::construct::optimal_illuminating_set;
use super::predicate::{illuminates_unchecked, Direction};
use crate::error::{Error, Result};
use crate::geometry::{check_cone_dim, extreme_points};

/// Largest `n` for [`illumination_number_exact`]; `2^n - 2` points must fit in a `u64`.
pub const MAX_EXACT_N: usize = 6;

#[derive(Clone, Debug, Serialize)]
pub struct ExactCover {
    pub n: usize,
    pub illumination_number: usize,
    /// A cover of that size.
    pub witness: Vec<Direction>,
    pub classes: usize,
    pub nodes: u64,
}

/// Minimum set cover over bitmask sets. Generic over the instance; knows
/// nothing about where the sets come from.
struct CoverSearch {
    universe: u64,
    sets: Vec<u64>,
    /// For each element, indices of the sets containing it.
    covering: Vec<Vec<usize>>,
    /// For each element, union of all sets containing it.
    neighbourhood: Vec<u64>,
    max_set_size: usize,
    best: Vec<usize>,
    nodes: u64,
}

impl CoverSearch {
    fn new(elements: usize, sets: Vec<u64>, incumbent: Vec<usize>) -> Self {
        let universe = if elements == 64 {
            u64::MAX
        } else {
            (1u64 << elements) - 1
        };
        let mut covering = vec![Vec::new(); elements];
        let mut neighbourhood = vec![0u64; elements];
        for (k, &s) in sets.iter().enumerate() {
            for (e, (cov, nb)) in covering.iter_mut().zip(neighbourhood.iter_mut()).enumerate() {
                if s & (1 << e) != 0 {
                    cov.push(k);
                    *nb |= s;
                }
            }
        }
        let max_set_size = sets.iter().map(|s| s.count_ones() as usize).max().unwrap_or(0);
        CoverSearch {
            universe,
            sets,
            covering,
            neighbourhood,
            max_set_size,
            best: incumbent,
            nodes: 0,
        }
    }

    fn uncovered_by_scarcity(&self, uncovered: u64) -> Vec<usize> {
        let mut elems: Vec<usize> = (0..self.covering.len())
            .filter(|&e| uncovered & (1 << e) != 0)
            .collect();
        elems.sort_by_key(|&e| (self.covering[e].len(), e));
        elems
    }

    fn lower_bound(&self, uncovered: u64) -> usize {
        if uncovered == 0 {
            return 0;
        }
        let count = uncovered.count_ones() as usize;
        let by_size = count.div_ceil(self.max_set_size.max(1));
        let mut blocked = 0u64;
        let mut packing = 0;
        for e in self.uncovered_by_scarcity(uncovered) {
            if blocked & (1 << e) == 0 {
                packing += 1;
                blocked |= self.neighbourhood[e];
            }
        }
        by_size.max(packing)
    }

    fn search(&mut self, covered: u64, chosen: &mut Vec<usize>) {
        self.nodes += 1;
        let uncovered = self.universe & !covered;
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        if chosen.len() + self.lower_bound(uncovered) >= self.best.len() {
            return;
        }
        let pivot = self.uncovered_by_scarcity(uncovered)[0];
        let mut options = self.covering[pivot].clone();
        options.sort_by_key(|&k| (std::cmp::Reverse((self.sets[k] & uncovered).count_ones()), k));
        for k in options {
            chosen.push(k);
            self.search(covered | self.sets[k], chosen);
            chosen.pop();
        }
    }
}

/// The illumination number of the Hilbert-norm ball for `2 <= n <= 6`.
pub fn illumination_number_exact(n: usize) -> Result<ExactCover> {
    check_cone_dim(n)?;
    if n > MAX_EXACT_N {
        return Err(Error::OutOfRange {
            what: "cone dimension n for exact set cover",
            value: n,
            min: 2,
            max: MAX_EXACT_N,
        });
    }
    let points = extreme_points(n)?;
    let classes: Vec<CanonicalClass> = canonical_classes(n)?;
    let pattern = |w: &[f64]| -> u64 {
        points
            .iter()
            .enumerate()
            .filter(|(_, z)| illuminates_unchecked(w, z))
            .fold(0u64, |acc, (e, _)| acc | (1 << e))
    };
    let sets: Vec<u64> = classes.iter().map(|c| pattern(c.direction.as_slice())).collect();

    // Seed the incumbent with the explicit construction, mapped to the
    // classes containing its directions.
    let incumbent: Vec<usize> = optimal_illuminating_set(n)?
        .iter()
        .map(|w| {
            let p = pattern(w.as_slice());
            sets.iter()
                .position(|&s| s & p == p)
                .expect("every pattern is contained in a class pattern")
        })
        .collect();

    let mut search = CoverSearch::new(points.len(), sets, incumbent);
    let mut chosen = Vec::new();
    search.search(0, &mut chosen);

    let witness: Vec<Direction> = search.best.iter().map(|&k| classes[k].direction.clone()).collect();
    Ok(ExactCover {
        n,
        illumination_number: witness.len(),
        witness,
        classes: classes.len(),
        nodes: search.nodes,
    })
}
