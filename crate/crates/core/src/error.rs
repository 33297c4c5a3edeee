use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: String, right: String },
    #[error("{residue} is not invertible mod {modulus} (p-adic valuation {valuation})")]
    NonInvertible {
        residue: String,
        modulus: String,
        valuation: u64,
    },
    #[error("value has p-adic valuation {0} < 0 and cannot be reduced mod a power of p")]
    NegativeValuation(i64),
    #[error("denominator of B_{index} is divisible by {p} since ({p} - 1) | {index}")]
    IrregularDenominator { index: u64, p: u64 },
    #[error("Bernoulli index {n} exceeds the configured cap {cap}")]
    BernoulliCap { n: u64, cap: u64 },
    #[error("brute-force enumeration of about {estimate} tuples exceeds the ceiling {ceiling}")]
    EnumerationCeiling { estimate: String, ceiling: u64 },
    #[error("truncated polynomial of length {needed} exceeds the limit {limit}")]
    PolynomialLength { needed: u64, limit: u64 },
    #[error("modulus {0} does not fit in a machine word")]
    ModulusTooWide(String),
    #[error("ill-posed congruence: {0}")]
    IllPosed(String),
    #[error("{0}")]
    Usage(String),
}

impl Error {
    /// Errors caused by a computation exceeding a configured size ceiling.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::EnumerationCeiling { .. }
                | Error::PolynomialLength { .. }
                | Error::ModulusTooWide(_)
                | Error::BernoulliCap { .. }
        )
    }
}
