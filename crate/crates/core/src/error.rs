use thiserror::Error;

/// Errors raised by field construction, polynomial manipulation, exact
/// distributions and the verification harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("modulus must have degree {expected} with nonzero leading coefficient")]
    BadModulus { expected: u32 },

    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },

    #[error("field of order {q} exceeds the table limit of {limit} elements")]
    TableLimit { q: u64, limit: u64 },

    #[error("element code {code} is not in a field of order {q}")]
    ForeignElement { code: u64, q: u32 },

    #[error("{0} is not a primitive element")]
    NotPrimitive(u32),

    #[error("discrete logarithm of zero is undefined")]
    LogOfZero,

    #[error("index {ell} does not divide q - 1 = {q_minus_one}")]
    IndexNotDivisor { ell: u64, q_minus_one: u64 },

    #[error("index is undefined for constant polynomials")]
    ConstantPolynomial,

    #[error("polynomial has a nonzero constant term")]
    NonzeroConstantTerm,

    #[error("polynomial has {len} coefficients but degree must stay below q = {q}")]
    DegreeTooLarge { len: usize, q: u32 },

    #[error("polynomials are defined over different fields")]
    FieldMismatch,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("moment order {k} outside 0..={max}")]
    MomentOrder { k: u64, max: u64 },

    #[error("{what} size {size} exceeds exact-mode limit {limit}")]
    ExactLimit { what: &'static str, size: u64, limit: u64 },

    #[error("enumeration of {what} needs {needed} cases, budget is {budget}")]
    Budget {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("sieve terms are inconsistent: {0}")]
    InconsistentSieve(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
