use thiserror::Error;

/// Errors raised by the cycle-counting library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid torus: {0}")]
    InvalidTorus(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parity violation: h = {h} and n = {n} differ mod 2 (or weight exceeds length)")]
    Parity { n: u64, h: u64 },

    #[error("zero Pochhammer denominator in F_C: c[{slot}] vanishes after {step} steps")]
    ZeroDenominator { slot: usize, step: u32 },

    #[error("series did not converge within {max_terms} terms")]
    NoConvergence { max_terms: usize },

    #[error("integrality check failed: {0}")]
    NonIntegral(String),

    #[error("work budget of {budget} exceeded (estimated {estimate})")]
    BudgetExceeded { budget: u64, estimate: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
