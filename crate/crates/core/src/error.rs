use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("non-integer coefficient at position {position}")]
    NonIntegerCoefficient { position: usize },

    #[error("non-integer exponent at position {position}")]
    NonIntegerExponent { position: usize },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("the zero polynomial has no normal form")]
    ZeroPolynomial,

    #[error("duplicate vertex {0:?}")]
    DuplicateVertex(Vec<i32>),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("modulus {modulus} must exceed the node count {nodes}")]
    ModulusTooSmall { modulus: u64, nodes: usize },

    #[error("row index {row} out of range for {nodes} + 1 nodes")]
    RowOutOfRange { row: usize, nodes: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("residues were computed modulo {found}, expected {expected}")]
    ModulusMismatch { expected: u64, found: u64 },

    #[error("moduli {0} and {1} are not coprime")]
    NotCoprime(u64, u64),

    #[error("split shortcut does not apply: {0}")]
    Split2Precondition(&'static str),

    #[error("dense product with {entries} entries exceeds the limit of {limit}")]
    SizeGuard { entries: u128, limit: u128 },

    #[error("unknown family `{0}`")]
    UnknownFamily(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid recurrence: {0}")]
    InvalidRecurrence(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
