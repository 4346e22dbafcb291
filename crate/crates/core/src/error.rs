use thiserror::Error;

/// Errors raised while constructing or combining finite measure-theoretic objects.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier has {len} points, above the configured cap of {cap}")]
    CarrierTooLarge { len: usize, cap: usize },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("set {0} is not contained in the carrier")]
    NotASubset(String),
    #[error("set {0} is not measurable")]
    NotMeasurable(String),
    #[error("map is not measurable: preimage of {0} is not measurable")]
    MapNotMeasurable(String),
    #[error("spaces do not match: {0}")]
    SpaceMismatch(String),
    #[error("value {value} at {at} lies outside [0,1]")]
    OutOfUnitInterval { value: String, at: String },
    #[error("negative weight {value} at {at}")]
    NegativeWeight { value: String, at: String },
    #[error("weights sum to {0}, expected 1")]
    NotNormalized(String),
    #[error("function is not constant on atom {0}")]
    NotConstantOnAtom(usize),
    #[error("expected {expected} entries, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
