//! Hilbert's projective metric on the open positive cone, the variation and
//! Hilbert norms, the logarithmic chart onto `V0`, and the extreme points of
//! the Hilbert-norm unit ball.
//!
//! Cone dimension is written `n`; the Hilbert-norm space has dimension `n - 1`
//! (the chart drops the last coordinate, which is always zero in `V0`).

use std::fmt;
use std::ops::Sub;

use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::subset::{Subset, MAX_UNIVERSE};

/// A point of the open cone `R^n_{>0}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PositiveVector(Vec<f64>);

impl PositiveVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::TooFewCoordinates { min: 1, found: 0 });
        }
        for (index, &value) in coords.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NonPositive { index, value });
            }
        }
        Ok(PositiveVector(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Multiplies every coordinate by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.0.iter().map(|x| x * factor).collect())
    }

    /// Rescales so that coordinate `index` equals one.
    pub fn normalized_at(&self, index: usize) -> Result<Self> {
        self.scaled(1.0 / self.0[index])
    }
}

impl AsRef<[f64]> for PositiveVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A vector of `(R^{n-1}, ||.||_H)`, i.e. `V0` with the trailing zero dropped.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct HVector(Vec<f64>);

impl HVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::TooFewCoordinates { min: 1, found: 0 });
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        Ok(HVector(coords))
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// The `V0` representative (last coordinate zero).
    pub fn to_v0(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.push(0.0);
        v
    }

    pub fn norm(&self) -> f64 {
        hilbert_norm(&self.0)
    }
}

impl Sub for &HVector {
    type Output = HVector;

    fn sub(self, rhs: &HVector) -> HVector {
        assert_eq!(self.dim(), rhs.dim(), "HVector dimension mismatch");
        HVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `d_H(x, y) = log max_i(x_i/y_i) - log min_i(x_i/y_i)`.
pub fn hilbert_distance(x: &PositiveVector, y: &PositiveVector) -> Result<f64> {
    ensure_dim(x.dim(), y.dim())?;
    Ok(hilbert_distance_unchecked(x.as_slice(), y.as_slice()))
}

/// [`hilbert_distance`] on raw slices of equal length with positive entries.
pub fn hilbert_distance_unchecked(x: &[f64], y: &[f64]) -> f64 {
    let (lo, hi) = x
        .iter()
        .zip(y)
        .map(|(a, b)| a / b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
    // exact zero for proportional inputs, never a tiny negative
    (hi.ln() - lo.ln()).max(0.0)
}

/// `max_i v_i - min_i v_i`. Zero for an empty slice.
pub fn variation_norm(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let (lo, hi) = min_max(v);
    hi - lo
}

/// `(max_i v_i ∨ 0) - (min_i v_i ∧ 0)`.
pub fn hilbert_norm(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let (lo, hi) = min_max(v);
    hi.max(0.0) - lo.min(0.0)
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
        (lo.min(x), hi.max(x))
    })
}

/// Chart from the rays of the open cone onto `(R^{n-1}, ||.||_H)`:
/// `x -> (log(x_1/x_n), ..., log(x_{n-1}/x_n))`.
pub fn log_map(x: &PositiveVector) -> Result<HVector> {
    let n = x.dim();
    if n < 2 {
        return Err(Error::TooFewCoordinates { min: 2, found: n });
    }
    let last = x.as_slice()[n - 1].ln();
    HVector::new(x.as_slice()[..n - 1].iter().map(|xi| xi.ln() - last).collect())
}

/// Inverse of [`log_map`] landing in `Σ0 = {x_n = 1}`.
pub fn exp_map(v: &HVector) -> Result<PositiveVector> {
    let mut coords: Vec<f64> = v.as_slice().iter().map(|vi| vi.exp()).collect();
    coords.push(1.0);
    PositiveVector::new(coords)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Extreme point `v^I_±` of the unit ball of `(R^{n-1}, ||.||_H)`:
/// coordinate `±1` on the support `I`, zero elsewhere.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtremePoint {
    pub sign: Sign,
    pub support: Subset,
    /// Dimension of the ambient space, `n - 1`.
    pub dim: usize,
}

impl ExtremePoint {
    pub fn new(sign: Sign, support: Subset, dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_UNIVERSE {
            return Err(Error::OutOfRange {
                what: "extreme point dimension",
                value: dim,
                min: 1,
                max: MAX_UNIVERSE,
            });
        }
        if support.is_empty() || !support.is_subset_of(Subset::full(dim)) {
            return Err(Error::ImproperSubset { universe: dim });
        }
        Ok(ExtremePoint { sign, support, dim })
    }

    /// Dense coordinates.
    pub fn realize(&self) -> Vec<f64> {
        let s = self.sign.value();
        (0..self.dim)
            .map(|i| if self.support.contains(i) { s } else { 0.0 })
            .collect()
    }

    /// Coordinate sum, i.e. `±|I|`.
    pub fn level(&self) -> i64 {
        match self.sign {
            Sign::Plus => self.support.len() as i64,
            Sign::Minus => -(self.support.len() as i64),
        }
    }

    pub fn negated(&self) -> ExtremePoint {
        ExtremePoint {
            sign: self.sign.flip(),
            ..*self
        }
    }

    /// Componentwise order `self <= other` on the realized vectors.
    pub fn le(&self, other: &ExtremePoint) -> bool {
        if self.dim != other.dim {
            return false;
        }
        match (self.sign, other.sign) {
            (Sign::Plus, Sign::Plus) => self.support.is_subset_of(other.support),
            (Sign::Minus, Sign::Minus) => other.support.is_subset_of(self.support),
            (Sign::Minus, Sign::Plus) => true,
            (Sign::Plus, Sign::Minus) => false,
        }
    }
}

/// Serialized as the realized integer vector, e.g. `[1, 0, 1]`.
impl Serialize for ExtremePoint {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let s: i8 = match self.sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        };
        let coords: Vec<i8> = (0..self.dim)
            .map(|i| if self.support.contains(i) { s } else { 0 })
            .collect();
        coords.serialize(serializer)
    }
}

impl fmt::Debug for ExtremePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "v{}{}", s, self.support)
    }
}

/// The `2^n - 2` extreme points of the Hilbert-norm ball for cone dimension
/// `n`: first `E_+` in increasing bitmask order, then `E_-` in the same order.
pub fn extreme_points(n: usize) -> Result<Vec<ExtremePoint>> {
    check_cone_dim(n)?;
    let dim = n - 1;
    let top = 1u64 << dim;
    let plus = (1..top).map(|b| ExtremePoint {
        sign: Sign::Plus,
        support: Subset::from_bits(b),
        dim,
    });
    let minus = (1..top).map(|b| ExtremePoint {
        sign: Sign::Minus,
        support: Subset::from_bits(b),
        dim,
    });
    Ok(plus.chain(minus).collect())
}

pub(crate) fn check_cone_dim(n: usize) -> Result<()> {
    if (2..=MAX_UNIVERSE).contains(&n) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "cone dimension n",
            value: n,
            min: 2,
            max: MAX_UNIVERSE,
        })
    }
}

/// Bookkeeping bijection from nonempty proper subsets `J` of `{1..n}` onto the
/// extreme points: `J` without `n` maps to `v^J_+`, `J` containing `n` maps to
/// `v^{{1..n-1} \ J}_-`.
pub fn subset_to_extreme_point(n: usize, j: Subset) -> Result<ExtremePoint> {
    check_cone_dim(n)?;
    if !j.is_proper_nonempty(n) {
        return Err(Error::ImproperSubset { universe: n });
    }
    let last = n - 1;
    let dim = n - 1;
    let point = if j.contains(last) {
        ExtremePoint {
            sign: Sign::Minus,
            support: j.complement(n),
            dim,
        }
    } else {
        ExtremePoint {
            sign: Sign::Plus,
            support: j,
            dim,
        }
    };
    Ok(point)
}

/// Inverse of [`subset_to_extreme_point`].
pub fn extreme_point_to_subset(z: &ExtremePoint) -> Subset {
    let n = z.dim + 1;
    match z.sign {
        Sign::Plus => z.support,
        Sign::Minus => z.support.complement(n),
    }
}
