use thiserror::Error;

/// Every failure the toolkit can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} is below 5")]
    CharacteristicTooSmall(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field {p}^{degree} exceeds the supported size")]
    SizeOverBudget { p: u64, degree: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("the zero element has no multiplicative order")]
    ZeroElement,
    #[error("factorization of {0} exceeded its iteration budget")]
    Timeout(String),
    #[error("no prime-form rule for n = {0}")]
    UnsupportedN(u32),
    #[error("index k = {k} out of range for degree {n}")]
    IndexOutOfRange { k: usize, n: usize },
    #[error("characteristic {p} divides k = {k}")]
    CharDividesK { p: u64, k: usize },
    #[error("{d} does not divide {m}")]
    NotDivisor { d: String, m: String },
    #[error("field of size {size} exceeds the {tier} budget of {limit}")]
    BudgetExceeded { size: u128, tier: String, limit: u128 },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("invalid sieve plan: {0}")]
    InvalidPlan(String),
    #[error("sieve plan has non-positive theta")]
    NonPositiveTheta,
    #[error("degree {0} is below 13")]
    NotLargeN(u32),
    #[error("no divisor policy for n = {n} ({class})")]
    UnknownPolicy { n: u32, class: String },
    #[error("count {count} is not divisible by n = {n}")]
    DivisibilityBreach { count: u64, n: u32 },
    #[error("comparison inside the float guard band: {0}")]
    AmbiguousComparison(String),
    #[error("malformed count cache: {0}")]
    BadCache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
