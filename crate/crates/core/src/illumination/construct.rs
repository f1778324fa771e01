//! Explicit illuminating sets of size `C(n, ceil(n/2))`.
//!
//! `E_+` and `E_-` are partitioned into chains taken from a symmetric chain
//! decomposition of `{0,1}^{n-1}`; every chain gets one direction. For odd `n`
//! the middle-rank singleton chains of `E_+` are paired with their
//! complements in `E_-` and each pair shares a direction.

use rayon::prelude::*;
use serde::Serialize;

use super::chains::symmetric_chain_decomposition;
use super::predicate::{illuminates_unchecked, Direction};
use crate::error::{Error, Result};
use crate::geometry::{check_cone_dim, extreme_points, ExtremePoint, Sign};
use crate::subset::Subset;

/// Largest cone dimension accepted by the constructive routines.
pub const MAX_CONSTRUCT_N: usize = 20;

/// One direction illuminating every element of a chain in `(E_+, <=)` or `(E_-, <=)`.
///
/// The chain is extended to a maximal chain; the coordinates it adds first get
/// the most negative values `-(n-1), ..., -1` (negated for `E_-`).
pub fn chain_illuminator(chain: &[ExtremePoint]) -> Result<Direction> {
    let Some(first) = chain.first() else {
        return Err(Error::NotAChain("empty chain".into()));
    };
    let (sign, dim) = (first.sign, first.dim);
    if let Some(p) = chain.iter().find(|p| p.sign != sign || p.dim != dim) {
        return Err(Error::NotAChain(format!(
            "{p:?} is not in the same part (E_+ or E_-) as {first:?}"
        )));
    }
    let mut supports: Vec<Subset> = chain.iter().map(|p| p.support).collect();
    supports.sort_by_key(|s| (s.len(), s.bits()));
    supports.dedup();
    for w in supports.windows(2) {
        if !w[0].is_subset_of(w[1]) {
            return Err(Error::NotAChain(format!(
                "supports {} and {} are incomparable",
                w[0], w[1]
            )));
        }
    }

    let mut order = Vec::with_capacity(dim);
    let mut placed = Subset::EMPTY;
    for s in supports.iter().chain(std::iter::once(&Subset::full(dim))) {
        order.extend(s.difference(placed).iter());
        placed = placed.union(*s);
    }
    let mut w = vec![0.0; dim];
    for (k, &i) in order.iter().enumerate() {
        w[i] = -((dim - k) as f64);
    }
    let w = Direction::new(w)?;
    Ok(match sign {
        Sign::Plus => w,
        Sign::Minus => w.negated(),
    })
}

/// One direction illuminating `x = v^I_+` and its complement `x' = v^{I^c}_-`:
/// `-1` on `I`, `+1` off `I`.
pub fn pair_illuminator(x: &ExtremePoint, x_prime: &ExtremePoint) -> Result<Direction> {
    if x.sign != Sign::Plus {
        return Err(Error::NotComplement(format!("{x:?} is not in E_+")));
    }
    let expected = x.support.complement(x.dim);
    if x_prime.sign != Sign::Minus || x_prime.dim != x.dim || x_prime.support != expected {
        return Err(Error::NotComplement(format!(
            "{x_prime:?} is not the E_- complement of {x:?}"
        )));
    }
    Direction::new(
        (0..x.dim)
            .map(|i| if x.support.contains(i) { -1.0 } else { 1.0 })
            .collect(),
    )
}

/// The pieces an optimal illuminating set is built from.
#[derive(Clone, Debug, Serialize)]
pub struct IlluminatingConstruction {
    pub n: usize,
    /// Chains of `E_+`, each illuminated by one direction.
    pub plus_chains: Vec<Vec<ExtremePoint>>,
    /// Chains of `E_-`, each illuminated by one direction.
    pub minus_chains: Vec<Vec<ExtremePoint>>,
    /// Odd `n` only: `(x, x')` pairs sharing one direction.
    pub pairs: Vec<(ExtremePoint, ExtremePoint)>,
    /// Chain directions (plus, then minus) followed by pair directions.
    pub directions: Vec<Direction>,
}

fn plus_point(support: Subset, dim: usize) -> ExtremePoint {
    ExtremePoint {
        sign: Sign::Plus,
        support,
        dim,
    }
}

fn minus_point(support: Subset, dim: usize) -> ExtremePoint {
    ExtremePoint {
        sign: Sign::Minus,
        support,
        dim,
    }
}

pub fn construct_illuminating_set(n: usize) -> Result<IlluminatingConstruction> {
    check_cone_dim(n)?;
    if n > MAX_CONSTRUCT_N {
        return Err(Error::OutOfRange {
            what: "cone dimension n",
            value: n,
            min: 2,
            max: MAX_CONSTRUCT_N,
        });
    }
    let dim = n - 1;
    let scd = symmetric_chain_decomposition(dim)?;
    let mut plus_chains = Vec::new();
    let mut minus_chains = Vec::new();
    let mut pairs = Vec::new();

    if n.is_multiple_of(2) {
        for chain in &scd.chains {
            // dropping the zero vector truncates the chain through it
            let plus: Vec<ExtremePoint> = chain
                .elements()
                .iter()
                .filter(|s| !s.is_empty())
                .map(|&s| plus_point(s, dim))
                .collect();
            if plus.is_empty() {
                continue;
            }
            minus_chains.push(plus.iter().map(ExtremePoint::negated).collect());
            plus_chains.push(plus);
        }
    } else {
        let upper = n.div_ceil(2);
        let middle = (n - 1) / 2;
        let full = Subset::full(dim);
        for chain in &scd.chains {
            let elements = chain.elements();
            if elements.iter().any(|s| s.len() == upper) {
                plus_chains.push(
                    elements
                        .iter()
                        .filter(|s| !s.is_empty())
                        .map(|&s| plus_point(s, dim))
                        .collect(),
                );
                // x -> x' maps the all-ones vector to zero, which is dropped
                minus_chains.push(
                    elements
                        .iter()
                        .filter(|&&s| s != full)
                        .map(|&s| minus_point(s.complement(dim), dim))
                        .collect(),
                );
            } else {
                match elements {
                    [x] if x.len() == middle => {
                        pairs.push((plus_point(*x, dim), minus_point(x.complement(dim), dim)));
                    }
                    _ => {
                        return Err(Error::NotAChain(format!(
                            "chain {elements:?} is neither long nor a middle singleton"
                        )))
                    }
                }
            }
        }
    }

    let mut directions = Vec::with_capacity(plus_chains.len() + minus_chains.len() + pairs.len());
    for chain in plus_chains.iter().chain(&minus_chains) {
        directions.push(chain_illuminator(chain)?);
    }
    for (x, xp) in &pairs {
        directions.push(pair_illuminator(x, xp)?);
    }
    Ok(IlluminatingConstruction {
        n,
        plus_chains,
        minus_chains,
        pairs,
        directions,
    })
}

/// `C(n, ceil(n/2))` directions illuminating the Hilbert-norm ball.
pub fn optimal_illuminating_set(n: usize) -> Result<Vec<Direction>> {
    Ok(construct_illuminating_set(n)?.directions)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub directions: usize,
    pub extreme_points: usize,
    pub covered: bool,
    pub unilluminated: Vec<ExtremePoint>,
}

/// Exhaustively checks every extreme point against `dirs`.
pub fn verify_illumination(dirs: &[Direction], n: usize) -> Result<VerificationReport> {
    let points = extreme_points(n)?;
    if let Some(d) = dirs.iter().find(|d| d.dim() != n - 1) {
        return Err(Error::DimensionMismatch {
            expected: n - 1,
            found: d.dim(),
        });
    }
    let unilluminated: Vec<ExtremePoint> = points
        .par_iter()
        .filter(|z| !dirs.iter().any(|w| illuminates_unchecked(w.as_slice(), z)))
        .copied()
        .collect();
    Ok(VerificationReport {
        n,
        directions: dirs.len(),
        extreme_points: points.len(),
        covered: unilluminated.is_empty(),
        unilluminated,
    })
}
