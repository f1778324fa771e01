//! Order-preserving, degree-one homogeneous self-maps of the open positive cone.
//!
//! [`ConeMap`] is the pluggable abstraction; [`MapSpec`] describes the built-in
//! families and is the on-disk JSON format:
//!
//! ```json
//! {"type": "matrix",   "data": [[2, 1], [1, 2]]}
//! {"type": "maxplus",  "data": [[1, 0.5], [0.5, 1]]}
//! {"type": "monomial", "exponents": [[0.5, 0.5], [1, 0]]}
//! {"type": "shear2"}
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{exp_map, hilbert_distance_unchecked, log_map, HVector, PositiveVector};

/// An order-preserving homogeneous map `R^n_{>0} -> R^n_{>0}`.
///
/// Implementations must be pure: the library may evaluate the same map from
/// several threads at once. Order preservation and homogeneity cannot be
/// checked statically; [`check_cone_map`] tests them statistically.
pub trait ConeMap: Send + Sync {
    fn dim(&self) -> usize;

    fn name(&self) -> String;

    /// Raw evaluation; `x` has length [`ConeMap::dim`].
    fn apply(&self, x: &[f64]) -> Vec<f64>;
}

impl<M: ConeMap + ?Sized> ConeMap for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn name(&self) -> String {
        (**self).name()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply(x)
    }
}

impl<M: ConeMap + ?Sized> ConeMap for Box<M> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn name(&self) -> String {
        (**self).name()
    }
    fn apply(&self, x: &[f64]) -> Vec<f64> {
        (**self).apply(x)
    }
}

/// Description of a built-in map family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MapSpec {
    /// `f(x) = A x` for a nonnegative square matrix with no zero row.
    Matrix { data: Vec<Vec<f64>> },
    /// `f_i(x) = max_j a_ij x_j`, same conditions as `Matrix`.
    #[serde(rename = "maxplus")]
    MaxPlus { data: Vec<Vec<f64>> },
    /// `f_i(x) = prod_j x_j^{P_ij}` for a nonnegative row-stochastic `P`.
    Monomial { exponents: Vec<Vec<f64>> },
    /// The linear map `[[1, 1], [0, 1]]` on the plane, which has no interior eigenvector.
    Shear2,
}

const ROW_SUM_TOL: f64 = 1e-12;

impl MapSpec {
    pub fn dim(&self) -> usize {
        match self {
            MapSpec::Matrix { data } | MapSpec::MaxPlus { data } => data.len(),
            MapSpec::Monomial { exponents } => exponents.len(),
            MapSpec::Shear2 => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            MapSpec::Matrix { .. } => "matrix",
            MapSpec::MaxPlus { .. } => "maxplus",
            MapSpec::Monomial { .. } => "monomial",
            MapSpec::Shear2 => "shear2",
        }
    }

    /// Checks the conditions under which the map sends the open cone into itself.
    pub fn validate(&self) -> Result<()> {
        match self {
            MapSpec::Matrix { data } | MapSpec::MaxPlus { data } => {
                check_square_nonnegative(data)?;
                if let Some(i) = data.iter().position(|row| row.iter().all(|&a| a == 0.0)) {
                    return Err(spec_error(
                        "positive-entry-per-row",
                        format!("row {} has no positive entry", i + 1),
                    ));
                }
                Ok(())
            }
            MapSpec::Monomial { exponents } => {
                check_square_nonnegative(exponents)?;
                for (i, row) in exponents.iter().enumerate() {
                    let sum: f64 = row.iter().sum();
                    if (sum - 1.0).abs() > ROW_SUM_TOL {
                        return Err(spec_error(
                            "row-sum-one",
                            format!("exponent row {} sums to {sum}", i + 1),
                        ));
                    }
                }
                Ok(())
            }
            MapSpec::Shear2 => Ok(()),
        }
    }

    /// Validates and returns an evaluable map.
    pub fn build(self) -> Result<BuiltinMap> {
        self.validate()?;
        Ok(BuiltinMap { spec: self })
    }

    /// Parses and validates a JSON spec.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: MapSpec = serde_json::from_str(text).map_err(|e| spec_error("json", e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let n = entries.len();
        let data = (0..n)
            .map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0.0 }).collect())
            .collect();
        MapSpec::Matrix { data }
    }
}

fn spec_error(invariant: &'static str, detail: String) -> Error {
    Error::InvalidMapSpec { invariant, detail }
}

fn check_square_nonnegative(rows: &[Vec<f64>]) -> Result<()> {
    let n = rows.len();
    if n == 0 {
        return Err(spec_error("nonempty", "matrix has no rows".into()));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(spec_error(
                "square",
                format!("row {} has {} entries, expected {n}", i + 1, row.len()),
            ));
        }
        for (j, &a) in row.iter().enumerate() {
            if !a.is_finite() {
                return Err(spec_error(
                    "finite-entries",
                    format!("entry ({}, {}) is {a}", i + 1, j + 1),
                ));
            }
            if a < 0.0 {
                return Err(spec_error(
                    "nonnegative-entries",
                    format!("entry ({}, {}) is {a}", i + 1, j + 1),
                ));
            }
        }
    }
    Ok(())
}

/// A validated [`MapSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct BuiltinMap {
    spec: MapSpec,
}

impl BuiltinMap {
    pub fn spec(&self) -> &MapSpec {
        &self.spec
    }
}

impl ConeMap for BuiltinMap {
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    fn name(&self) -> String {
        self.spec.kind().to_string()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        match &self.spec {
            MapSpec::Matrix { data } => data
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, xj)| a * xj).sum())
                .collect(),
            MapSpec::MaxPlus { data } => data
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, xj)| a * xj).fold(0.0, f64::max))
                .collect(),
            MapSpec::Monomial { exponents } => {
                let logs: Vec<f64> = x.iter().map(|v| v.ln()).collect();
                exponents
                    .iter()
                    .map(|row| row.iter().zip(&logs).map(|(p, l)| p * l).sum::<f64>().exp())
                    .collect()
            }
            MapSpec::Shear2 => vec![x[0] + x[1], x[1]],
        }
    }
}

/// `f(x)`, checked to lie in the open cone.
pub fn evaluate<F: ConeMap + ?Sized>(f: &F, x: &PositiveVector) -> Result<PositiveVector> {
    ensure_dim(f.dim(), x.dim())?;
    let y = f.apply(x.as_slice());
    ensure_dim(f.dim(), y.len())?;
    if let Some((index, &value)) = y.iter().enumerate().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::NonPositiveOutput {
            map: f.name(),
            index,
            value,
        });
    }
    PositiveVector::new(y)
}

/// `f(x)_j / x_j` for every coordinate.
pub fn ratio_vector<F: ConeMap + ?Sized>(f: &F, x: &PositiveVector) -> Result<Vec<f64>> {
    let fx = evaluate(f, x)?;
    Ok(fx.as_slice().iter().zip(x.as_slice()).map(|(a, b)| a / b).collect())
}

/// The normalized map `g_f(x) = f(x) / f(x)_n`, which lands in `{x_n = 1}`.
pub fn normalize<F: ConeMap + ?Sized>(f: &F, x: &PositiveVector) -> Result<PositiveVector> {
    let fx = evaluate(f, x)?;
    fx.normalized_at(fx.dim() - 1)
}

/// The conjugate `h = Log ∘ g_f ∘ Exp` acting on `(R^{n-1}, ||.||_H)`.
pub fn conjugate_log_map<F: ConeMap + ?Sized>(f: &F, v: &HVector) -> Result<HVector> {
    ensure_dim(f.dim(), v.dim() + 1)?;
    log_map(&normalize(f, &exp_map(v)?)?)
}

/// Statistical check of order preservation and degree-one homogeneity.
///
/// Draws `probes` log-uniform points in `(e^{-3}, e^3)^n` from a seeded stream.
/// Homogeneity is compared with relative tolerance `1e-9`; order preservation
/// allows a relative slack of `1e-12`.
pub fn check_cone_map<F: ConeMap + ?Sized>(f: &F, probes: usize, seed: u64) -> Result<()> {
    let n = f.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..probes {
        let x = PositiveVector::new((0..n).map(|_| rng.random_range(-3.0..3.0f64).exp()).collect())?;
        let fx = evaluate(f, &x)?;

        let lambda = rng.random_range(-2.0..2.0f64).exp();
        let flx = evaluate(f, &x.scaled(lambda)?)?;
        for (j, (a, b)) in flx.as_slice().iter().zip(fx.as_slice()).enumerate() {
            let expected = lambda * b;
            if (a - expected).abs() > 1e-9 * expected.abs().max(a.abs()) {
                return Err(Error::MapPropertyViolation {
                    map: f.name(),
                    property: "homogeneity",
                    detail: format!("f(λx)_{} = {a}, λ f(x)_{} = {expected}, λ = {lambda}", j + 1, j + 1),
                });
            }
        }

        let y = PositiveVector::new(
            x.as_slice()
                .iter()
                .map(|xi| xi * (1.0 + rng.random_range(0.0..1.0f64)))
                .collect(),
        )?;
        let fy = evaluate(f, &y)?;
        for (j, (a, b)) in fx.as_slice().iter().zip(fy.as_slice()).enumerate() {
            if *a > b + 1e-12 * a.abs().max(b.abs()) {
                return Err(Error::MapPropertyViolation {
                    map: f.name(),
                    property: "order-preservation",
                    detail: format!("x <= y but f(x)_{} = {a} > f(y)_{} = {b}", j + 1, j + 1),
                });
            }
        }
    }
    Ok(())
}

/// `d_H(f(x), f(y))`, for nonexpansiveness checks.
pub fn image_distance<F: ConeMap + ?Sized>(f: &F, x: &PositiveVector, y: &PositiveVector) -> Result<f64> {
    let fx = evaluate(f, x)?;
    let fy = evaluate(f, y)?;
    ensure_dim(fx.dim(), fy.dim())?;
    Ok(hilbert_distance_unchecked(fx.as_slice(), fy.as_slice()))
}
