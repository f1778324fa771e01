//! Lower-bound certificates: a set of extreme points no two of which can be
//! illuminated by the same direction.
//!
//! The points are `A_+(k) ∪ A_-(m)`, all `v^I_+` with `|I| = k` and all `v^I_-`
//! with `|I| = m`. Each pair is checked against every canonical direction class,
//! which covers every direction up to a perturbation that loses no illumination.

use rayon::prelude::*;
use serde::Serialize;

use super::classes::canonical_classes;
use super::predicate::illuminates_unchecked;
use crate::error::Result;
use crate::geometry::{check_cone_dim, ExtremePoint, Sign};
use crate::subset::Subset;

#[derive(Clone, Debug, Serialize)]
pub struct PairCheck {
    pub pair: (ExtremePoint, ExtremePoint),
    /// No canonical class illuminates both points.
    pub unshareable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LowerBoundCertificate {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub size: usize,
    pub points: Vec<ExtremePoint>,
    pub pairs: Vec<PairCheck>,
    pub classes_checked: usize,
    pub verified: bool,
}

/// Antichain levels `(k, m)` used for the certificate.
pub fn certificate_levels(n: usize) -> (usize, usize) {
    if n % 2 == 1 {
        ((n - 1) / 2, n.div_ceil(2))
    } else {
        let k = (n - 1).div_ceil(2);
        (k, k)
    }
}

fn level_points(sign: Sign, level: usize, dim: usize) -> impl Iterator<Item = ExtremePoint> {
    (1u64..(1u64 << dim))
        .map(Subset::from_bits)
        .filter(move |s| s.len() == level)
        .map(move |support| ExtremePoint { sign, support, dim })
}

pub fn lower_bound_certificate(n: usize) -> Result<LowerBoundCertificate> {
    check_cone_dim(n)?;
    let classes = canonical_classes(n)?;
    let dim = n - 1;
    let (k, m) = certificate_levels(n);
    let points: Vec<ExtremePoint> = level_points(Sign::Plus, k, dim)
        .chain(level_points(Sign::Minus, m, dim))
        .collect();
    let size = points.len();

    // For each class, the certificate points it illuminates.
    let hits: Vec<Vec<usize>> = classes
        .par_iter()
        .map(|c| {
            let w = c.direction.as_slice();
            points
                .iter()
                .enumerate()
                .filter(|(_, z)| illuminates_unchecked(w, z))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let mut shared = vec![false; size * size];
    for h in &hits {
        for (a, &i) in h.iter().enumerate() {
            for &j in &h[a + 1..] {
                shared[i * size + j] = true;
                shared[j * size + i] = true;
            }
        }
    }

    let mut pairs = Vec::with_capacity(size * size.saturating_sub(1) / 2);
    for i in 0..size {
        for j in i + 1..size {
            pairs.push(PairCheck {
                pair: (points[i], points[j]),
                unshareable: !shared[i * size + j],
            });
        }
    }
    let verified = pairs.iter().all(|p| p.unshareable);
    Ok(LowerBoundCertificate {
        n,
        k,
        m,
        size,
        points,
        pairs,
        classes_checked: classes.len(),
        verified,
    })
}
