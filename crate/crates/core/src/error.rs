use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    Signature(String),
    #[error("signature mismatch between operands")]
    SignatureMismatch,
    #[error("negative exponent {exp} on non-invertible variable `{var}`")]
    NegativeExponent { var: String, exp: i64 },
    #[error("symbol `{0}` is not mapped and does not exist in the target signature")]
    UnmappedSymbol(String),
    #[error("cannot invert `{0}`: image of an invertible variable is not a unit monomial")]
    NotInvertible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid matrix: {0}")]
    Matrix(String),
    #[error("matrix has rank {rank}, expected full row rank {rows}")]
    RankDeficient { rank: usize, rows: usize },
    #[error("cone is not full-dimensional (rank {rank} < {dim})")]
    NotFullDimensional { rank: usize, dim: usize },
    #[error("integer overflow converting {0} to i64")]
    Overflow(String),
    #[error("invalid hypergeometric parameters: {0}")]
    Params(String),
    #[error("parameters are not admissible: {0}")]
    Admissibility(String),
    #[error("elimination inconclusive at bound {bound}: {reason}")]
    Inconclusive { bound: usize, reason: String },
    #[error("shape assertion failed: {0}")]
    Shape(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
