use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a prime: {0}")]
    NotPrime(u64),
    #[error("empty vector")]
    EmptyVector,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("expected {expected} points, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("degenerate pair: both sides equal {0}")]
    DegeneratePair(String),
    #[error("no candidates in height class k={k}")]
    EmptyWindow { k: u32 },
    #[error("singular matrix: image of the integer lattice is not a lattice")]
    NotALattice,
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("search space of {candidates} candidates exceeds the guard of {guard}")]
    SearchTooLarge { candidates: u128, guard: u128 },
    #[error("comparison undecidable at digit precision {0}")]
    PrecisionExhausted(usize),
    #[error("radius {0} is not a nonnegative power of 1/{1}")]
    UnsnappedRadius(String, u64),
    #[error("ball has measure zero")]
    EmptyBall,
    #[error("degenerate fit grid: {0}")]
    FitError(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}
