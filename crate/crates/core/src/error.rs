use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite input value")]
    NonFinite,

    #[error("coordinates are not a closed Weyl chamber point: {0:?}")]
    NotInChamber(Vec<f64>),

    #[error("dimension parameter p = {p} is below 2q-1 for q = {q}")]
    DimensionBelowBoundary { p: f64, q: usize },

    #[error("dimension parameter p = {p} must be strictly above 2q-1 for q = {q}")]
    DimensionNotAboveBoundary { p: f64, q: usize },

    #[error("rank q = {0} is outside the supported range 1..=8")]
    UnsupportedRank(usize),

    #[error("shape mismatch: expected size {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },

    #[error("singular value {0} is below 1; the sampled matrices are not admissible")]
    SingularValueBelowOne(f64),

    #[error("eigenvalue 1+tau = {re}+{im}i left the open right half-plane")]
    BranchOutsideHalfPlane { re: f64, im: f64 },

    #[error("operation requires a real index l, got imaginary part {0}")]
    ComplexIndex(f64),

    #[error("gamma function pole at {re}+{im}i")]
    GammaPole { re: f64, im: f64 },

    #[error("hypergeometric series did not converge after {0} terms")]
    SeriesNotConverged(usize),

    #[error("argument outside the supported domain: {0}")]
    UnsupportedArgument(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
