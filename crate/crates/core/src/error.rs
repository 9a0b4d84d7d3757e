use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("field of size {size} exceeds the configured bound {bound}")]
    FieldTooLarge { size: u64, bound: u64 },

    #[error("evaluation point must be nonzero")]
    ZeroEvaluationPoint,

    #[error("divisor is zero")]
    DivisionByZero,

    #[error("exact division failed: divisor does not divide dividend")]
    NotDivisible,

    #[error("Laurent exponent window [{lo}, {hi}] exceeds the supported range")]
    WindowOverflow { lo: i64, hi: i64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("half-rank n = {0} is not supported (need n >= 2)")]
    InvalidHalfRank(usize),

    #[error("matrix determinant is not 1")]
    DeterminantNotOne,

    #[error("matrix is singular")]
    Singular,

    #[error("parameter is not admissible: conj(lambda) + a*lambda != 0")]
    InadmissibleLambda,

    #[error("element is the identity")]
    IdentityElement,

    #[error("generator {0} is the identity")]
    IdentityGenerator(usize),

    #[error("generator set is not closed under inversion")]
    NotSymmetric,

    #[error("matrix does not preserve the form")]
    NotFormPreserving,

    #[error("deterministic search exhausted: {0}")]
    SearchExhausted(String),

    #[error("internal identity failed: {0}")]
    InternalIdentity(String),

    #[error("element cap {limit} exceeded after {partial} elements")]
    CapExceeded { limit: usize, partial: usize },

    #[error("graph with {n} vertices exceeds the bound {bound}")]
    GraphTooLarge { n: usize, bound: usize },

    #[error("graph is not regular")]
    NotRegular,

    #[error("iteration did not converge: estimate {estimate}, residual {residual} after {iterations} iterations")]
    NoConvergence {
        estimate: f64,
        residual: f64,
        iterations: usize,
    },

    #[error("invalid affine permutation window: {0}")]
    InvalidWindow(String),

    #[error("malformed cache data: {0}")]
    Format(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
