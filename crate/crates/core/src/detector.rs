//! Detection of interior eigenvectors by recording strict ratio gaps.
//!
//! A map `f` has a nonempty, Hilbert-bounded set of interior eigenvectors iff
//! every nonempty proper subset `J` of `{1..n}` admits some `x` with
//!
//! ```text
//! max_{j ∈ J} f(x)_j / x_j  <  min_{j ∉ J} f(x)_j / x_j.
//! ```
//!
//! [`run`] samples test points, records every subset a point certifies, and
//! halts once all `2^n - 2` subsets are recorded. The subsets certified by one
//! point are the prefixes of its sorted ratio vector, so they form a chain.
//! Since the middle layer of the subset lattice is an antichain of size
//! `C(n, ceil(n/2))`, at least that many samples are needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{ensure_dim, Error, Result};
use crate::geometry::{hilbert_distance_unchecked, PositiveVector};
use crate::illumination::symmetric_chain_decomposition;
use crate::maps::{check_cone_map, evaluate, normalize, ratio_vector, ConeMap};
use crate::subset::{central_binomial, Subset};

/// Ratios within this relative distance are treated as equal.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Cap on the largest coordinate ratio of a scheduled test point.
pub const DYNAMIC_RANGE_CAP: f64 = 1e12;

/// Largest cone dimension the ledger tracks (`2^n` flags).
pub const MAX_DETECT_N: usize = 24;

/// Minimum number of samples any halting run needs: `C(n, ceil(n/2))` for `n >= 2`.
pub fn universal_lower_bound(n: usize) -> u64 {
    if n < 2 {
        0
    } else {
        central_binomial(n)
    }
}

/// Subsets certified by a ratio vector: for each strict gap between
/// consecutive sorted ratios, the indices at or below the gap. Returned in
/// increasing order, so each is contained in the next.
pub fn recordable_subsets(ratios: &[f64]) -> Vec<Subset> {
    let mut order: Vec<usize> = (0..ratios.len()).collect();
    order.sort_by(|&a, &b| ratios[a].total_cmp(&ratios[b]).then(a.cmp(&b)));
    let mut out = Vec::new();
    let mut prefix = Subset::EMPTY;
    for w in order.windows(2) {
        prefix.insert(w[0]);
        let (lo, hi) = (ratios[w[0]], ratios[w[1]]);
        if hi - lo > TIE_TOLERANCE * hi.abs().max(lo.abs()) {
            out.push(prefix);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleRecord {
    /// Zero-based sample index.
    pub sample: usize,
    pub point: PositiveVector,
    pub ratios: Vec<f64>,
    pub recorded: Vec<Subset>,
    /// How many of `recorded` were new to the ledger.
    pub new: usize,
}

/// Subsets recorded so far, plus a bounded per-sample history.
#[derive(Clone, Debug)]
pub struct SubsetLedger {
    n: usize,
    flags: Vec<bool>,
    count: usize,
    samples: usize,
    recordings: usize,
    last_new_sample: Option<usize>,
    history: Vec<SampleRecord>,
    history_cap: usize,
}

impl SubsetLedger {
    pub fn new(n: usize) -> Result<Self> {
        Self::with_history_cap(n, 1000)
    }

    pub fn with_history_cap(n: usize, history_cap: usize) -> Result<Self> {
        if !(1..=MAX_DETECT_N).contains(&n) {
            return Err(Error::OutOfRange {
                what: "cone dimension n for detection",
                value: n,
                min: 1,
                max: MAX_DETECT_N,
            });
        }
        Ok(SubsetLedger {
            n,
            flags: vec![false; 1 << n],
            count: 0,
            samples: 0,
            recordings: 0,
            last_new_sample: None,
            history: Vec::new(),
            history_cap,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `2^n - 2`.
    pub fn total(&self) -> usize {
        (1usize << self.n) - 2
    }

    pub fn recorded_count(&self) -> usize {
        self.count
    }

    pub fn is_complete(&self) -> bool {
        self.count == self.total()
    }

    pub fn is_recorded(&self, j: Subset) -> bool {
        (j.bits() as usize) < self.flags.len() && self.flags[j.bits() as usize]
    }

    /// Marks `j` as recorded; returns whether it was new.
    pub fn insert(&mut self, j: Subset) -> Result<bool> {
        if !j.is_proper_nonempty(self.n) {
            return Err(Error::ImproperSubset { universe: self.n });
        }
        let flag = &mut self.flags[j.bits() as usize];
        let new = !*flag;
        if new {
            *flag = true;
            self.count += 1;
        }
        Ok(new)
    }

    pub fn recorded(&self) -> impl Iterator<Item = Subset> + '_ {
        self.proper().filter(|j| self.flags[j.bits() as usize])
    }

    pub fn unrecorded(&self) -> impl Iterator<Item = Subset> + '_ {
        self.proper().filter(|j| !self.flags[j.bits() as usize])
    }

    fn proper(&self) -> impl Iterator<Item = Subset> {
        (1u64..(1u64 << self.n) - 1).map(Subset::from_bits)
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// Total recordings including repeats.
    pub fn recordings(&self) -> usize {
        self.recordings
    }

    pub fn last_new_sample(&self) -> Option<usize> {
        self.last_new_sample
    }

    /// The first `history_cap` samples.
    pub fn history(&self) -> &[SampleRecord] {
        &self.history
    }

    fn push_sample(&mut self, point: &PositiveVector, ratios: Vec<f64>, recorded: &[Subset]) -> Result<()> {
        let mut new = 0;
        for &j in recorded {
            if self.insert(j)? {
                new += 1;
            }
        }
        if new > 0 {
            self.last_new_sample = Some(self.samples);
        }
        if self.history.len() < self.history_cap {
            self.history.push(SampleRecord {
                sample: self.samples,
                point: point.clone(),
                ratios,
                recorded: recorded.to_vec(),
                new,
            });
        }
        self.samples += 1;
        self.recordings += recorded.len();
        Ok(())
    }
}

/// Evaluates one test point, records every subset it certifies and returns them.
pub fn record_step<F: ConeMap + ?Sized>(f: &F, x: &PositiveVector, ledger: &mut SubsetLedger) -> Result<Vec<Subset>> {
    ensure_dim(ledger.n(), x.dim())?;
    let ratios = ratio_vector(f, x)?;
    let recorded = recordable_subsets(&ratios);
    ledger.push_sample(x, ratios, &recorded)?;
    Ok(recorded)
}

/// Fewest further samples that could complete the ledger: the largest number
/// of unrecorded subsets of a single size. Each size class is an antichain and
/// one sample records a chain, so it meets each class at most once.
pub fn min_remaining_lower_bound(ledger: &SubsetLedger) -> usize {
    let mut per_level = vec![0usize; ledger.n() + 1];
    for j in ledger.unrecorded() {
        per_level[j.len()] += 1;
    }
    per_level.into_iter().max().unwrap_or(0)
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerMode {
    /// `x_1 = 1`, `x_j` uniform in `(0, 1)`.
    PaperLiteral,
    /// `x_1 = 1`, `x_j = exp(u_j)` with `u_j` uniform in `(-R, R)`.
    LogUniform,
    /// A fixed list of points, by default [`chain_schedule`].
    Scheduled,
}

impl std::str::FromStr for SamplerMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-literal" => Ok(SamplerMode::PaperLiteral),
            "log-uniform" => Ok(SamplerMode::LogUniform),
            "scheduled" => Ok(SamplerMode::Scheduled),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode '{other}' (expected paper-literal, log-uniform or scheduled)"
            ))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SamplerConfig {
    pub mode: SamplerMode,
    /// Log-uniform half width `R`.
    pub radius: f64,
    /// Level base for the default schedule.
    pub beta: f64,
    pub seed: u64,
    pub max_iterations: usize,
    /// Explicit points for scheduled mode; `None` uses `chain_schedule(n, beta)`.
    pub schedule: Option<Vec<PositiveVector>>,
    pub history_cap: usize,
    /// Random probes for the order-preservation / homogeneity check, 0 to skip.
    pub property_probes: usize,
    /// Tolerance and iteration budget for the eigenvector estimate on halting.
    pub eigen_tol: f64,
    pub eigen_max_iter: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            mode: SamplerMode::LogUniform,
            radius: 3.0,
            beta: 1000.0,
            seed: 0,
            max_iterations: 10_000,
            schedule: None,
            history_cap: 1000,
            property_probes: 16,
            eigen_tol: 1e-10,
            eigen_max_iter: 10_000,
        }
    }
}

impl SamplerConfig {
    pub fn log_uniform(radius: f64, seed: u64, max_iterations: usize) -> Self {
        SamplerConfig {
            mode: SamplerMode::LogUniform,
            radius,
            seed,
            max_iterations,
            ..Default::default()
        }
    }

    pub fn paper_literal(seed: u64, max_iterations: usize) -> Self {
        SamplerConfig {
            mode: SamplerMode::PaperLiteral,
            seed,
            max_iterations,
            ..Default::default()
        }
    }

    pub fn scheduled(beta: f64, max_iterations: usize) -> Self {
        SamplerConfig {
            mode: SamplerMode::Scheduled,
            beta,
            max_iterations,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if !(self.beta.is_finite() && self.beta > 1.0) {
            return Err(Error::InvalidConfig(format!("beta must exceed 1, got {}", self.beta)));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if !(self.eigen_tol.is_finite() && self.eigen_tol > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "eigen_tol must be positive, got {}",
                self.eigen_tol
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenEstimate {
    pub vector: PositiveVector,
    /// Geometric mean of the extreme ratios `f(v)_j / v_j`.
    pub eigenvalue: f64,
    /// `d_H(v, f(v))`, the log spread of the ratios.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Iterates the normalized map `x -> f(x) / f(x)_n` until `d_H(x, f(x)) <= tol`.
///
/// Nonexpansiveness gives no convergence guarantee; failure to converge is
/// reported in the result, not as an error.
pub fn estimate_eigenvector<F: ConeMap + ?Sized>(
    f: &F,
    x0: &PositiveVector,
    tol: f64,
    max_iter: usize,
) -> Result<EigenEstimate> {
    ensure_dim(f.dim(), x0.dim())?;
    let mut x = x0.clone();
    let mut iterations = 0;
    loop {
        let fx = evaluate(f, &x)?;
        let residual = hilbert_distance_unchecked(x.as_slice(), fx.as_slice());
        if residual <= tol || iterations >= max_iter {
            let (lo, hi) = fx
                .as_slice()
                .iter()
                .zip(x.as_slice())
                .map(|(a, b)| a / b)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| (lo.min(r), hi.max(r)));
            return Ok(EigenEstimate {
                vector: x,
                eigenvalue: (lo * hi).sqrt(),
                residual,
                iterations,
                converged: residual <= tol,
            });
        }
        x = normalize(f, &x)?;
        iterations += 1;
    }
}

/// One test point per chain of a symmetric chain decomposition of the subsets
/// of `{1..n}` (with the empty and full sets removed).
///
/// For a chain `J_1 ⊂ ... ⊂ J_k`, coordinate `j` gets level "number of chain
/// members containing `j`" and value `beta^level`, rescaled so `x_1 = 1`.
pub fn chain_schedule(n: usize, beta: f64) -> Result<Vec<PositiveVector>> {
    if n < 2 {
        return Err(Error::OutOfRange {
            what: "cone dimension n for scheduling",
            value: n,
            min: 2,
            max: MAX_DETECT_N,
        });
    }
    if !(beta.is_finite() && beta > 1.0) {
        return Err(Error::InvalidConfig(format!("beta must exceed 1, got {beta}")));
    }
    // the longest chain has n - 1 members, so levels span 0..=n-1
    let range = beta.powi(n as i32 - 1);
    if range.is_nan() || range > DYNAMIC_RANGE_CAP {
        return Err(Error::DynamicRange {
            range,
            cap: DYNAMIC_RANGE_CAP,
        });
    }
    let scd = symmetric_chain_decomposition(n)?;
    let full = Subset::full(n);
    scd.chains
        .iter()
        .map(|chain| {
            let members: Vec<Subset> = chain
                .elements()
                .iter()
                .copied()
                .filter(|s| !s.is_empty() && *s != full)
                .collect();
            let level = |j: usize| members.iter().filter(|s| s.contains(j)).count() as i32;
            let base = level(0);
            PositiveVector::new((0..n).map(|j| beta.powi(level(j) - base)).collect())
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DetectionReport {
    pub map: String,
    pub n: usize,
    pub mode: SamplerMode,
    pub halted: bool,
    pub samples_used: usize,
    pub recorded: usize,
    pub total_subsets: usize,
    /// Further samples needed at minimum (0 once halted).
    pub remaining_lower_bound: usize,
    /// `C(n, ceil(n/2))`: no halting run can use fewer samples.
    pub universal_lower_bound: u64,
    /// Unrecorded subsets, one-based; at most 64 listed.
    pub unrecorded: Vec<Subset>,
    pub eigenvector: Option<EigenEstimate>,
}

const UNRECORDED_LISTED: usize = 64;

/// Runs the detector and returns the report.
pub fn run<F: ConeMap + ?Sized>(f: &F, cfg: &SamplerConfig) -> Result<DetectionReport> {
    run_with_ledger(f, cfg).map(|(report, _)| report)
}

/// Like [`run`], also returning the final ledger (with its sample history).
pub fn run_with_ledger<F: ConeMap + ?Sized>(f: &F, cfg: &SamplerConfig) -> Result<(DetectionReport, SubsetLedger)> {
    cfg.validate()?;
    let n = f.dim();
    let mut ledger = SubsetLedger::with_history_cap(n, cfg.history_cap)?;
    if cfg.property_probes > 0 {
        check_cone_map(f, cfg.property_probes, cfg.seed ^ 0x5eed_c0de)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let schedule = match (cfg.mode, &cfg.schedule) {
        (SamplerMode::Scheduled, Some(points)) => points.clone(),
        (SamplerMode::Scheduled, None) if n >= 2 => chain_schedule(n, cfg.beta)?,
        _ => Vec::new(),
    };

    while !ledger.is_complete() && ledger.samples() < cfg.max_iterations {
        let x = match cfg.mode {
            SamplerMode::PaperLiteral => {
                let mut coords = vec![1.0];
                coords.extend((1..n).map(|_| open_unit(&mut rng)));
                PositiveVector::new(coords)?
            }
            SamplerMode::LogUniform => {
                let mut coords = vec![1.0];
                coords.extend((1..n).map(|_| rng.random_range(-cfg.radius..cfg.radius).exp()));
                PositiveVector::new(coords)?
            }
            SamplerMode::Scheduled => match schedule.get(ledger.samples()) {
                Some(x) => x.clone(),
                None => break,
            },
        };
        record_step(f, &x, &mut ledger)?;
    }

    let halted = ledger.is_complete();
    let eigenvector = if halted && n >= 1 {
        let ones = PositiveVector::new(vec![1.0; n])?;
        Some(estimate_eigenvector(f, &ones, cfg.eigen_tol, cfg.eigen_max_iter)?)
    } else {
        None
    };
    let report = DetectionReport {
        map: f.name(),
        n,
        mode: cfg.mode,
        halted,
        samples_used: ledger.samples(),
        recorded: ledger.recorded_count(),
        total_subsets: ledger.total(),
        remaining_lower_bound: min_remaining_lower_bound(&ledger),
        universal_lower_bound: universal_lower_bound(n),
        unrecorded: ledger.unrecorded().take(UNRECORDED_LISTED).collect(),
        eigenvector,
    };
    Ok((report, ledger))
}

fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::MapSpec;

    fn pv(v: &[f64]) -> PositiveVector {
        PositiveVector::new(v.to_vec()).unwrap()
    }

    fn sym() -> crate::maps::BuiltinMap {
        MapSpec::Matrix {
            data: vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        }
        .build()
        .unwrap()
    }

    fn s(ix: &[usize]) -> Subset {
        Subset::from_one_based(ix.iter().copied())
    }

    #[test]
    fn record_step_examples() {
        let shear = MapSpec::Shear2.build().unwrap();
        let mut ledger = SubsetLedger::new(2).unwrap();
        assert_eq!(
            record_step(&shear, &pv(&[1.0, 0.5]), &mut ledger).unwrap(),
            vec![s(&[2])]
        );

        let id = MapSpec::identity(3).build().unwrap();
        let mut ledger = SubsetLedger::new(3).unwrap();
        assert!(record_step(&id, &pv(&[1.0, 0.2, 7.0]), &mut ledger).unwrap().is_empty());
        assert_eq!(ledger.recorded_count(), 0);

        let mut ledger = SubsetLedger::new(2).unwrap();
        assert_eq!(
            record_step(&sym(), &pv(&[1.0, 0.5]), &mut ledger).unwrap(),
            vec![s(&[1])]
        );
        assert!(!ledger.is_complete());
        assert_eq!(
            record_step(&sym(), &pv(&[1.0, 2.0]), &mut ledger).unwrap(),
            vec![s(&[2])]
        );
        assert!(ledger.is_complete());
        assert_eq!(ledger.samples(), 2);

        assert!(record_step(&sym(), &pv(&[1.0, 2.0, 3.0]), &mut ledger).is_err());
    }

    #[test]
    fn recordable_subsets_are_nested_prefixes() {
        let r = [3.0, 1.0, 2.0, 2.0];
        let rec = recordable_subsets(&r);
        assert_eq!(rec, vec![s(&[2]), s(&[2, 3, 4])]);
        // relative ties within 1e-12 do not open a gap
        let r = [1.0, 1.0 + 1e-14, 2.0];
        assert_eq!(recordable_subsets(&r), vec![s(&[1, 2])]);
        let r = [1.0, 1.0 + 1e-9];
        assert_eq!(recordable_subsets(&r), vec![s(&[1])]);
    }

    #[test]
    fn remaining_lower_bound_examples() {
        let ledger = SubsetLedger::new(4).unwrap();
        assert_eq!(min_remaining_lower_bound(&ledger), 6);

        let mut ledger = SubsetLedger::new(4).unwrap();
        for j in (1u64..15).map(Subset::from_bits).filter(|j| j.len() == 2) {
            ledger.insert(j).unwrap();
        }
        assert_eq!(min_remaining_lower_bound(&ledger), 4);

        for j in (1u64..15).map(Subset::from_bits) {
            ledger.insert(j).unwrap();
        }
        assert_eq!(min_remaining_lower_bound(&ledger), 0);
        assert!(ledger.insert(Subset::full(4)).is_err());
        assert!(ledger.insert(Subset::EMPTY).is_err());
    }

    #[test]
    fn run_examples() {
        let report = run(&sym(), &SamplerConfig::log_uniform(3.0, 11, 10_000)).unwrap();
        assert!(report.halted);
        assert!(report.samples_used >= 2);
        let eig = report.eigenvector.unwrap();
        assert!(eig.converged);
        assert!((eig.eigenvalue - 3.0).abs() < 1e-9);

        let shear = MapSpec::Shear2.build().unwrap();
        let report = run(&shear, &SamplerConfig::log_uniform(3.0, 7, 100_000)).unwrap();
        assert!(!report.halted);
        assert_eq!(report.samples_used, 100_000);
        assert_eq!(report.recorded, 1);
        assert_eq!(report.unrecorded, vec![s(&[1])]);

        let id = MapSpec::identity(3).build().unwrap();
        let report = run(&id, &SamplerConfig::log_uniform(3.0, 7, 1000)).unwrap();
        assert!(!report.halted);
        assert_eq!(report.recorded, 0);
        assert_eq!(report.remaining_lower_bound, 3);
    }

    #[test]
    fn trivial_dimension_one() {
        let f = MapSpec::Matrix { data: vec![vec![2.0]] }.build().unwrap();
        let report = run(&f, &SamplerConfig::default()).unwrap();
        assert!(report.halted);
        assert_eq!(report.samples_used, 0);
        assert_eq!(report.total_subsets, 0);
        assert_eq!(report.universal_lower_bound, 0);
        assert!((report.eigenvector.unwrap().eigenvalue - 2.0).abs() < 1e-12);
    }

    #[test]
    fn paper_literal_cannot_reach_every_subset_of_symmetric_matrix() {
        // x_1 = 1 is the largest coordinate, so J = {2} needs x_2 > x_1
        let report = run(&sym(), &SamplerConfig::paper_literal(3, 2000)).unwrap();
        assert!(!report.halted);
        assert_eq!(report.unrecorded, vec![s(&[2])]);
    }

    #[test]
    fn config_validation() {
        let cfg = SamplerConfig {
            radius: 0.0,
            ..Default::default()
        };
        assert!(matches!(run(&sym(), &cfg), Err(Error::InvalidConfig(_))));
        let cfg = SamplerConfig {
            beta: 1.0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SamplerConfig {
            max_iterations: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        assert_eq!("log-uniform".parse::<SamplerMode>().unwrap(), SamplerMode::LogUniform);
        assert!("uniform".parse::<SamplerMode>().is_err());
    }

    #[test]
    fn eigen_examples() {
        let est = estimate_eigenvector(&sym(), &pv(&[1.0, 0.3]), 1e-10, 1000).unwrap();
        assert!(est.converged);
        assert!(est.residual <= 1e-10);
        assert!((est.vector.as_slice()[0] / est.vector.as_slice()[1] - 1.0).abs() < 1e-9);
        assert!((est.eigenvalue - 3.0).abs() < 1e-9);

        let id = MapSpec::identity(3).build().unwrap();
        let x0 = pv(&[0.5, 2.0, 3.0]);
        let est = estimate_eigenvector(&id, &x0, 1e-12, 10).unwrap();
        assert_eq!(est.vector, x0);
        assert_eq!(est.eigenvalue, 1.0);
        assert_eq!(est.residual, 0.0);

        let shear = MapSpec::Shear2.build().unwrap();
        let est = estimate_eigenvector(&shear, &pv(&[1.0, 1.0]), 1e-9, 10_000).unwrap();
        assert!(!est.converged);
    }

    #[test]
    fn schedule_examples() {
        let pts = chain_schedule(2, 1000.0).unwrap();
        assert_eq!(pts.len(), 2);
        assert_eq!(pts[0].as_slice(), &[1.0, 1e-3]);
        assert_eq!(pts[1].as_slice(), &[1.0, 1e3]);
        assert_eq!(chain_schedule(4, 1000.0).unwrap().len(), 6);
        assert_eq!(chain_schedule(5, 1000.0).unwrap().len(), 10);
        assert!(matches!(chain_schedule(6, 1000.0), Err(Error::DynamicRange { .. })));
        assert!(chain_schedule(3, 1.0).is_err());
        assert!(chain_schedule(1, 10.0).is_err());
    }
}
