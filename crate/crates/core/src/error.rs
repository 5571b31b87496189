use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("matrix must have dimension at least 1")]
    EmptyMatrix,

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("modulus {0} is not prime; this analysis is only defined over prime fields")]
    NotPrime(u64),

    #[error("(T, p) is not admissible: det(T) = {det}, p = {p} (need det != 0 and gcd(det, p) = 1)")]
    Inadmissible { det: String, p: u64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("distributions have different shapes: (p={p1}, d={d1}) vs (p={p2}, d={d2})")]
    ShapeMismatch { p1: u64, d1: usize, p2: u64, d2: usize },

    #[error("{states} states exceed the dense state budget of {cap}")]
    StateBudget { states: u128, cap: u64 },

    #[error("{characters} nontrivial characters exceed the character budget of {cap}; use a sampled character lower bound instead")]
    CharacterBudget { characters: u128, cap: u64 },

    #[error("polynomial root finder did not converge after {attempts} attempts")]
    RootsDidNotConverge { attempts: u32 },

    #[error("T^{m} has no eigenvalue 1 over the complex numbers")]
    NoUnitEigenvalue { m: u32 },

    #[error("degenerate prime {p}: (T^{m})^t - I is invertible mod p")]
    DegeneratePrime { p: u64, m: u32 },

    #[error("character lower bound needs at least one candidate character")]
    EmptyCandidates,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
