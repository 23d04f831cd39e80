use thiserror::Error;

/// Errors raised by the arithmetic and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("mismatched moduli: {0} vs {1}")]
    ModulusMismatch(u64, u64),

    #[error("field F_{q}^{f} is too large for this tool (q^f must fit in 64 bits)")]
    FieldTooLarge { q: u64, f: u64 },

    #[error("q-adic precision exhausted at {precision} digits (cap {cap})")]
    PrecisionExhausted { precision: u32, cap: u32 },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
