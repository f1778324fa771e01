//! When does a direction illuminate an extreme point of the Hilbert-norm ball?
//!
//! For `z = v^I_+` and small `λ > 0`,
//! `||z + λw||_H = 1 + λ (max_{i∈I} w_i - min(min_{j∉I} w_j, 0))`
//! exactly, so `w` illuminates `z` iff `max_I w < 0` and `max_I w < w_j` for
//! all `j ∉ I`. The `v^I_-` case is the mirror image under `x -> -x`.

use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{hilbert_norm, ExtremePoint, Sign};

/// A nonzero vector of `(R^{n-1}, ||.||_H)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Direction(Vec<f64>);

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::TooFewCoordinates { min: 1, found: 0 });
        }
        if let Some((index, &value)) = coords.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite { index, value });
        }
        if coords.iter().all(|&c| c == 0.0) {
            return Err(Error::ZeroDirection);
        }
        Ok(Direction(coords))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn negated(&self) -> Direction {
        Direction(self.0.iter().map(|c| -c).collect())
    }
}

/// Closed-form illumination test.
pub fn illuminates(w: &Direction, z: &ExtremePoint) -> Result<bool> {
    ensure_dim(z.dim, w.dim())?;
    Ok(illuminates_unchecked(w.as_slice(), z))
}

pub(crate) fn illuminates_unchecked(w: &[f64], z: &ExtremePoint) -> bool {
    match z.sign {
        Sign::Plus => {
            let top = z.support.iter().map(|i| w[i]).fold(f64::NEG_INFINITY, f64::max);
            top < 0.0 && (0..w.len()).all(|j| z.support.contains(j) || top < w[j])
        }
        Sign::Minus => {
            let bottom = z.support.iter().map(|i| w[i]).fold(f64::INFINITY, f64::min);
            bottom > 0.0 && (0..w.len()).all(|j| z.support.contains(j) || bottom > w[j])
        }
    }
}

/// The defining test evaluated at one small step:
/// `||z + λw||_H < 1` with `λ = 1e-6 / max_i |w_i|`.
pub fn illuminates_by_definition(w: &Direction, z: &ExtremePoint) -> Result<bool> {
    ensure_dim(z.dim, w.dim())?;
    let scale = w.as_slice().iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let lambda = 1e-6 / scale;
    let moved: Vec<f64> = z
        .realize()
        .iter()
        .zip(w.as_slice())
        .map(|(zi, wi)| zi + lambda * wi)
        .collect();
    Ok(hilbert_norm(&moved) < 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subset::Subset;

    fn dir(v: &[f64]) -> Direction {
        Direction::new(v.to_vec()).unwrap()
    }

    fn plus(ix: &[usize], dim: usize) -> ExtremePoint {
        ExtremePoint::new(Sign::Plus, Subset::from_one_based(ix.iter().copied()), dim).unwrap()
    }

    #[test]
    fn examples() {
        let z = plus(&[1, 2], 2);
        assert!(illuminates(&dir(&[-2.0, -1.0]), &z).unwrap());
        assert!(illuminates_by_definition(&dir(&[-2.0, -1.0]), &z).unwrap());

        let z = plus(&[1], 2);
        assert!(!illuminates(&dir(&[-1.0, -2.0]), &z).unwrap());
        assert!(!illuminates_by_definition(&dir(&[-1.0, -2.0]), &z).unwrap());

        for z in [plus(&[1], 3), plus(&[2, 3], 3), plus(&[1, 2, 3], 3)] {
            let w = Direction::new(z.realize()).unwrap();
            assert!(!illuminates(&w, &z).unwrap());
            assert!(!illuminates_by_definition(&w, &z).unwrap());
        }
    }

    #[test]
    fn ties_do_not_illuminate() {
        // max over I equals a value off I: the norm stays exactly 1
        let z = plus(&[1], 2);
        let w = dir(&[-1.0, -1.0]);
        assert!(!illuminates(&w, &z).unwrap());
        assert!(!illuminates_by_definition(&w, &z).unwrap());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Direction::new(vec![0.0, 0.0]), Err(Error::ZeroDirection));
        assert!(Direction::new(vec![]).is_err());
        assert!(Direction::new(vec![f64::NAN]).is_err());
        assert!(matches!(
            illuminates(&dir(&[1.0]), &plus(&[1], 2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
