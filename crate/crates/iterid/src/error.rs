use thiserror::Error;

/// Errors surfaced to callers. Violations of internal invariants (mixing
/// ambient primes, mismatched oracle parameters) are hard errors and panic
/// instead; they cannot be reached through a validated configuration.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("cannot parse {input:?} as {expected}: {reason}")]
    ParseValue {
        input: String,
        expected: &'static str,
        reason: String,
    },

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("word uses variables up to x{arity} but the assignment supplies {got} element(s)")]
    Arity { arity: usize, got: usize },

    #[error("search exhausted at bound {bound} without reaching the identity")]
    Exhausted { bound: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;
