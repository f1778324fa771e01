//! Illumination of the unit ball of `(R^{n-1}, ||.||_H)`.

mod certificate;
mod chains;
mod classes;
mod construct;
mod cover;
mod predicate;

pub use certificate::{certificate_levels, lower_bound_certificate, LowerBoundCertificate, PairCheck};
pub use chains::{symmetric_chain_decomposition, ChainDecomposition, SubsetChain, MAX_CHAIN_DIM};
pub use classes::{canonical_classes, illumination_patterns, CanonicalClass, IlluminationPattern, MAX_CLASS_N};
pub use construct::{
    chain_illuminator, construct_illuminating_set, optimal_illuminating_set, pair_illuminator, verify_illumination,
    IlluminatingConstruction, VerificationReport, MAX_CONSTRUCT_N,
};
pub use cover::{illumination_number_exact, ExactCover, MAX_EXACT_N};
pub use predicate::{illuminates, illuminates_by_definition, Direction};
