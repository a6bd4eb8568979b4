use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: String, right: String },

    #[error("{0} is not a unit")]
    NonUnit(String),

    #[error("p^{m} with p = {p} does not fit in 62 bits")]
    PrecisionOverflow { p: u64, m: u32 },

    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),

    #[error("ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("element is not in the divided-power ideal: {0}")]
    NotInPdIdeal(String),

    #[error("divided powers are not available on {0}")]
    NotPdRing(String),

    #[error("unsupported truncation {source_ring} -> {target}")]
    UnsupportedTruncation { source_ring: String, target: String },

    #[error("ring map is not well defined: {0}")]
    IllDefinedMap(String),

    #[error("series parameter mismatch: {0}")]
    SeriesMismatch(String),

    #[error("cannot substitute a unit constant for {0}")]
    UnitConstantSubstitution(String),

    #[error("generator {index} does not vanish at the point (value {value})")]
    PointNotAZero { index: usize, value: String },

    #[error("image of {0} is not in the maximal ideal")]
    ImageNotInMaxIdeal(String),

    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("incompatible data: {0}")]
    Incompatible(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}
