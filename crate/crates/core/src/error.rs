use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not coprime to the modulus {modulus}")]
    NotCoprime { value: u64, modulus: u64 },

    #[error("modulus must be positive")]
    ZeroModulus,

    #[error("moduli differ ({0} vs {1})")]
    ModulusMismatch(u64, u64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("zeta_{p} does not lie in the field")]
    PrimeNotInField { p: u64 },

    #[error("element {value} does not lie in the required subgroup mod {modulus}")]
    NotInSubgroup { value: u64, modulus: u64 },

    #[error("subgroup is not closed under multiplication mod {0}")]
    NotClosed(u64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("requested subfield is not unique or does not exist: {0}")]
    AmbiguousSubfield(String),

    #[error("no admissible (rho, sigma, B) found: {0}")]
    SelectionFailure(String),

    #[error("{what} needs {size} elements, above the limit {limit}")]
    ResourceLimit { what: &'static str, size: u128, limit: u64 },

    #[error("no prime congruent to {residue} mod {modulus} up to {bound}")]
    PrimeNotFound { residue: u64, modulus: u64, bound: u64 },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrimeNotInField { .. } => 2,
            Error::InvariantViolation(_) | Error::SelectionFailure(_) => 3,
            Error::ResourceLimit { .. } | Error::PrimeNotFound { .. } => 4,
            _ => 1,
        }
    }
}
