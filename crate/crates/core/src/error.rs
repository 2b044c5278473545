use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("extension degree must be at least 1")]
    ZeroDegree,

    #[error("modulus must be monic of degree {expected}, got coefficient vector of length {got}")]
    ModulusShape { expected: u32, got: usize },

    #[error("modulus coefficient {0} is not a residue mod p")]
    ModulusCoefficient(u32),

    #[error("modulus is reducible over GF({p})")]
    ReducibleModulus { p: u32 },

    #[error("field cardinality {order} exceeds the exhaustive bound {bound}")]
    OverBound { order: u64, bound: u64 },

    #[error("operands belong to different fields")]
    ContextMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("element encoding {code} out of range for a field of {order} elements")]
    InvalidElement { code: u64, order: u32 },

    #[error("expected {expected} entries, got {got}")]
    Length { expected: usize, got: usize },

    #[error("relative degree {n} does not divide the extension degree {m}")]
    SubfieldDegree { n: u32, m: u32 },

    #[error("elements are not a basis over the subfield")]
    NotBasis,

    #[error("element {0} is not in the subfield")]
    NotInSubfield(u32),

    #[error("polynomial is not a permutation of the field")]
    NotPermutation,

    #[error("a^(q+1) = 1 is required, a = {0}")]
    NotUnitNorm(u32),

    #[error("parameters fail the family conditions: {0}")]
    InvalidParams(String),

    #[error("Dickson matrix is singular")]
    SingularDickson,

    #[error("combiner identity fails at x = {x}: got {got}")]
    IdentityFails { x: u32, got: u32 },

    #[error("local certification failed: {0}")]
    CertificationFailed(String),

    #[error("expression error: {0}")]
    Expr(String),

    #[error("{what}: {value} exceeds guard {guard}")]
    Guard {
        what: &'static str,
        value: u64,
        guard: u64,
    },

    #[error("{s} does not divide q - 1 = {q_minus_one}")]
    NotDivisor { s: u64, q_minus_one: u64 },

    #[error("{0}")]
    Domain(String),

    #[error("internal consistency check failed: {0}")]
    Invariant(String),
}
