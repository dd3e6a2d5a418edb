use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group factor {0} is invalid: cyclic orders must be at least 2")]
    InvalidFactor(u64),
    #[error("group must have at least one cyclic factor")]
    EmptyGroup,
    #[error("group order {0} exceeds the supported maximum {1}")]
    GroupTooLarge(u128, usize),
    #[error("element has {found} coordinates, group has {expected} factors")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("element {0} is not a member of the group")]
    NotMember(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree {0} is out of range (1..=4)")]
    DegreeOutOfRange(u32),
    #[error("field of size {0} exceeds the supported maximum {1}")]
    FieldTooLarge(u128, usize),
    #[error("polynomial {0} is not a monic irreducible modulus of the requested degree")]
    NotIrreducible(String),
    #[error("field element {0} does not belong to this field")]
    FieldMismatch(String),

    #[error("matrix is not Hermitian: max deviation {0:e}")]
    NotHermitian(f64),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("negative probability {value} at ({u}, {v})")]
    NegativeProbability { u: usize, v: usize, value: f64 },
    #[error("input distribution sums to {0}, expected 1")]
    NotNormalized(f64),
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("table is ragged or empty: {0}")]
    RaggedTable(String),
    #[error("box is invalid: {0}")]
    InvalidBox(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("the game matrix of the identity character is not a game matrix")]
    IdentityCharacter,

    #[error("enumeration budget exceeded: {count} assignments (limit {limit})")]
    Budget { count: u128, limit: u128 },
    #[error("NLC size cap exceeded: d^n = {0} (limit {1})")]
    NlcTooLarge(u128, usize),

    #[error("verification failed in leg '{leg}': {detail}")]
    Verification { leg: String, detail: String },

    #[error("parse error: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
