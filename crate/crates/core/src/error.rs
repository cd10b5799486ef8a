use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NonPrime(u64),
    #[error("modulus {p}^{k} does not fit in 63 bits")]
    ModulusOverflow { p: u64, k: u32 },
    #[error("ring has {card} elements, above the enumeration bound {bound}")]
    BoundExceeded { card: u128, bound: u64 },
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(i64, i64),
    #[error("degree {degree} is not divisible by {p}")]
    DegreeNotDivisible { degree: i64, p: u64 },
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("vector too short: need length {need}, got {got}")]
    TooShort { need: usize, got: usize },
    #[error("precision exhausted at index {0}")]
    PrecisionExhausted(usize),
    #[error("not a ghost sequence: divisibility fails at index {0}")]
    NotGhost(usize),
    #[error("Dwork congruence fails at index {0}")]
    DworkViolated(usize),
    #[error("strategies disagree on {0}")]
    StrategyDisagreement(String),
    #[error("symbolic bound exceeded: n = {n} > {bound}")]
    SymbolicBound { n: usize, bound: usize },
    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal fault: {0}")]
    Internal(String),
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown check id: {0}")]
    UnknownCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}
