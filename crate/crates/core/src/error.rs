use thiserror::Error;

/// Errors raised by field construction, spec handling, polynomial and code
/// operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("field order {p}^{m} exceeds the supported maximum of 65536")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("missing or mismatched operand for {0}")]
    BadOperand(&'static str),
    #[error("{encoding} is not an element encoding of GF({order})")]
    InvalidElement { encoding: u32, order: u32 },
    #[error("{d} is not the order of a subfield of GF({q})")]
    NotASubfield { d: u32, q: u32 },
    #[error("empty projective set")]
    EmptyProjectiveSet,
    #[error("set A_{0} is a singleton but follows a larger set")]
    NonLeadingSingleton(usize),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("invalid scalar for A_{index}: {reason}")]
    InvalidScalar { index: usize, reason: String },
    #[error("degree {d} outside the admissible range {lo}..={hi}")]
    DegreeOutOfRange { d: u64, lo: u64, hi: u64 },
    #[error("invalid witness choice: {0}")]
    InvalidChoice(String),
    #[error("expected {expected} variables, found {found}")]
    VariableMismatch { expected: usize, found: usize },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("config error: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
