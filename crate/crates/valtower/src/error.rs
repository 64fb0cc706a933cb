use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("divisor is not monic in y")]
    NotMonic,
    #[error("element is not a unit (zero constant term)")]
    NotAUnit,
    #[error("series is zero to its precision")]
    Indeterminate,
    #[error("f(0, y) vanishes; strip the x-power first")]
    DivisibleByX,
    #[error("generating sequence too short for y-degree {degree} (span {span})")]
    SequenceTooShort { degree: u64, span: u64 },
    #[error("residue lies outside the coefficient field")]
    NotInField,
    #[error("values differ: {0} vs {1}")]
    ValueMismatch(String, String),
    #[error("invalid generating sequence: {0}")]
    InvalidSequence(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("transform not applicable: {0}")]
    NotApplicable(String),
    #[error("declared quotient is not polynomial in the new chart: {0}")]
    NonPolynomial(String),
    #[error("u is not a unit times a power of x: {0}")]
    NotMonomial(String),
    #[error("d = {d} is not a power of p = {p}")]
    DNotPPower { d: u64, p: u64 },
    #[error("inconsistent degree data: {0}")]
    Inconsistent(String),
    #[error("matrix is singular")]
    Singular,
    #[error("reduction did not terminate within {0} steps")]
    NonTermination(usize),
    #[error("order of the value in the quotient is {actual}, expected {expected}")]
    OrderMismatch { expected: u64, actual: u64 },
    #[error("rational rank {rank} plus transcendence degree {trdeg} exceeds 2")]
    AbhyankarViolation { rank: u32, trdeg: u32 },
    #[error("precision {given} too low, need at least {needed}")]
    PrecisionTooLow { given: u32, needed: u32 },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
