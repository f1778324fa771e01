//! Positive eigenvectors of order-preserving homogeneous cone maps, and the
//! illumination number of the variation-norm unit ball.
//!
//! - [`geometry`]: Hilbert's metric, the variation and Hilbert norms, the
//!   logarithmic chart and the extreme points of the unit ball.
//! - [`maps`]: the [`ConeMap`] abstraction and built-in map families.
//! - [`illumination`]: symmetric chain decompositions, optimal illuminating
//!   sets of size `C(n, ceil(n/2))`, and the matching lower-bound oracles.
//! - [`detector`]: the subset-recording eigenvector detector.

pub mod detector;
pub mod error;
pub mod geometry;
pub mod illumination;
pub mod maps;
pub mod subset;

pub use detector::{
    chain_schedule, estimate_eigenvector, min_remaining_lower_bound, record_step, run, DetectionReport, EigenEstimate,
    SamplerConfig, SamplerMode, SubsetLedger,
};
pub use error::{Error, Result};
pub use geometry::{
    exp_map, extreme_points, hilbert_distance, hilbert_norm, log_map, subset_to_extreme_point, variation_norm,
    ExtremePoint, HVector, PositiveVector, Sign,
};
pub use illumination::{
    illuminates, illumination_number_exact, lower_bound_certificate, optimal_illuminating_set,
    symmetric_chain_decomposition, verify_illumination, Direction,
};
pub use maps::{conjugate_log_map, evaluate, normalize, ratio_vector, BuiltinMap, ConeMap, MapSpec};
pub use subset::{central_binomial, Subset};
