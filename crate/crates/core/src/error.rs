use thiserror::Error;

/// Errors raised by the library. Every variant corresponds to rejected
/// input or to a computation that could not be completed; none of them
/// signals that a checked statement turned out to be false.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} is outside the supported range |n| <= {bound}")]
    IndexOutOfBound { index: i64, bound: i64 },

    #[error("index {0} must be non-negative")]
    NegativeIndex(i64),

    #[error("{what} is undefined at n = {n}: requires {constraint}")]
    Domain {
        what: String,
        n: i64,
        constraint: String,
    },

    #[error("empty range [{lo}, {hi}]")]
    EmptyRange { lo: i64, hi: i64 },

    #[error("empty term list")]
    EmptyTerms,

    #[error("unknown identifier `{0}`")]
    UnknownId(String),

    #[error("quaternion parameters differ: H({left}) vs H({right})")]
    ParamMismatch { left: String, right: String },

    #[error("algebra parameter {0} must be nonzero")]
    ZeroParameter(&'static str),

    #[error("family {family} at n = {n} is degenerate: {reason}")]
    DegenerateFamily {
        family: String,
        n: i64,
        reason: String,
    },

    #[error("search height {height} exceeds the limit {limit}")]
    HeightExceeded { height: u64, limit: u64 },

    #[error("undecided: factorization budget exhausted on {0}")]
    Undecided(String),

    #[error("discriminant A^2 + 4B = {0} is not positive")]
    NonPositiveDiscriminant(String),

    #[error("degenerate limit: {0}")]
    DegenerateLimit(String),

    #[error("backward extension d(-1) = ({numerator})/{denominator} is not an integer")]
    NonIntegralBackward {
        numerator: String,
        denominator: String,
    },

    #[error("generators do not commute")]
    NonCommuting,

    #[error("group law violated: {0}")]
    GroupLaw(String),

    #[error("iteration count {n} exceeds the limit {limit}")]
    TooManySteps { n: u64, limit: u64 },

    #[error("cannot parse `{input}` as {expected}")]
    Parse { input: String, expected: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;
