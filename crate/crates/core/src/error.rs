use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector must have at least {min} coordinates, found {found}")]
    TooFewCoordinates { min: usize, found: usize },

    #[error("coordinate {index} is {value}, expected a strictly positive finite value")]
    NonPositive { index: usize, value: f64 },

    #[error("coordinate {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },

    #[error("direction must have a nonzero coordinate")]
    ZeroDirection,

    #[error("{what}: {value} is outside the supported range {min}..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("subset must be nonempty and proper in a universe of size {universe}")]
    ImproperSubset { universe: usize },

    #[error("extreme points do not form a chain: {0}")]
    NotAChain(String),

    #[error("{0}")]
    NotComplement(String),

    #[error("invalid map spec ({invariant}): {detail}")]
    InvalidMapSpec { invariant: &'static str, detail: String },

    #[error("map '{map}' produced a non-positive or non-finite coordinate {index}: {value}")]
    NonPositiveOutput { map: String, index: usize, value: f64 },

    #[error("map '{map}' fails the {property} check: {detail}")]
    MapPropertyViolation {
        map: String,
        property: &'static str,
        detail: String,
    },

    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),

    #[error("schedule dynamic range {range:e} exceeds the cap {cap:e}")]
    DynamicRange { range: f64, cap: f64 },
}

impl Error {
    /// Short stable identifier, suitable for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::TooFewCoordinates { .. } => "too-few-coordinates",
            Error::NonPositive { .. } => "non-positive",
            Error::NonFinite { .. } => "non-finite",
            Error::ZeroDirection => "zero-direction",
            Error::OutOfRange { .. } => "out-of-range",
            Error::ImproperSubset { .. } => "improper-subset",
            Error::NotAChain(_) => "not-a-chain",
            Error::NotComplement(_) => "not-complement",
            Error::InvalidMapSpec { .. } => "invalid-map-spec",
            Error::NonPositiveOutput { .. } => "non-positive-output",
            Error::MapPropertyViolation { .. } => "map-property-violation",
            Error::InvalidConfig(_) => "invalid-config",
            Error::DynamicRange { .. } => "dynamic-range",
        }
    }

    /// The violated invariant for spec/property errors, if any.
    pub fn invariant(&self) -> Option<&'static str> {
        match self {
            Error::InvalidMapSpec { invariant, .. } => Some(invariant),
            Error::MapPropertyViolation { property, .. } => Some(property),
            _ => None,
        }
    }
}

pub(crate) fn ensure_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
