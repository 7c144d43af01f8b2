use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("binomial index out of range: t={t} for n={n}")]
    BinomialIndex { n: u64, t: i64 },

    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u64, base: u64 },

    #[error("block word must be nonempty and contain a nonzero symbol")]
    DegenerateWord,

    #[error("{what} = {value} exceeds the limit {limit}")]
    Guard {
        what: &'static str,
        value: u64,
        limit: u64,
    },

    #[error("n = {n} is not in the interval [2^{lambda}, 2^{})", lambda + 1)]
    OutsideInterval { n: u64, lambda: u32 },

    #[error("series shape mismatch: {0}")]
    Shape(String),

    #[error("denominator has a zero constant term")]
    ZeroConstantTerm,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn guard(what: &'static str, value: u64, limit: u64) -> Result<()> {
    if value > limit {
        Err(Error::Guard { what, value, limit })
    } else {
        Ok(())
    }
}
