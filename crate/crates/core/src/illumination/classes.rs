//! Canonical direction classes.
//!
//! Which extreme points a direction illuminates depends only on the relative
//! order of its coordinates together with 0. A class is a strict ordering of
//! the `n - 1` coordinates and a zero marker, represented by the integer
//! direction whose value at each coordinate is its rank minus the rank of the
//! marker. Ties and zero coordinates need no classes of their own: the set of
//! directions illuminating a given point is open, so a small generic
//! perturbation keeps every illumination.

use itertools::Itertools;
use serde::Serialize;

use super::predicate::{illuminates_unchecked, Direction};
use crate::error::{Error, Result};
use crate::geometry::{check_cone_dim, ExtremePoint};

/// Largest cone dimension for class enumeration (`n!` classes).
pub const MAX_CLASS_N: usize = 9;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalClass {
    /// Symbols from smallest to largest value; symbol `n - 1` is the zero marker.
    pub ordering: Vec<usize>,
    pub direction: Direction,
}

/// All `n!` classes, in lexicographic order of `ordering`.
pub fn canonical_classes(n: usize) -> Result<Vec<CanonicalClass>> {
    check_cone_dim(n)?;
    if n > MAX_CLASS_N {
        return Err(Error::OutOfRange {
            what: "cone dimension n for class enumeration",
            value: n,
            min: 2,
            max: MAX_CLASS_N,
        });
    }
    let zero = n - 1;
    Ok((0..n)
        .permutations(n)
        .map(|ordering| {
            let zero_rank = ordering.iter().position(|&s| s == zero).unwrap() as f64;
            let mut w = vec![0.0; n - 1];
            for (rank, &s) in ordering.iter().enumerate() {
                if s != zero {
                    w[s] = rank as f64 - zero_rank;
                }
            }
            CanonicalClass {
                ordering,
                direction: Direction::new(w).expect("distinct nonzero coordinates"),
            }
        })
        .collect())
}

/// The set of extreme points a class illuminates.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IlluminationPattern {
    pub class: CanonicalClass,
    pub illuminated: Vec<ExtremePoint>,
}

/// Patterns of every class against `points`, evaluated with the closed-form predicate.
pub fn illumination_patterns(n: usize, points: &[ExtremePoint]) -> Result<Vec<IlluminationPattern>> {
    Ok(canonical_classes(n)?
        .into_iter()
        .map(|class| {
            let illuminated = points
                .iter()
                .filter(|z| illuminates_unchecked(class.direction.as_slice(), z))
                .copied()
                .collect();
            IlluminationPattern { class, illuminated }
        })
        .collect())
}
