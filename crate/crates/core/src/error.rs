use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Dynkin type: {0}")]
    InvalidDynkin(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid rank-2 input: {0}")]
    InvalidRank2(String),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("poset is not a lattice: {0}")]
    NotLattice(String),
    #[error("no unique minimum label for cover ({0}, {1})")]
    NonUniqueLabel(usize, usize),
    #[error("shard construction failed: {0}")]
    ShardConstruction(String),
    #[error("algebra construction failed: {0}")]
    Algebra(String),
    #[error("ideal computation failed: {0}")]
    Ideal(String),
    #[error("representation error: {0}")]
    Rep(String),
    #[error("submodule enumeration disagreed across primes {primes:?}: {detail}")]
    PrimeDisagreement { primes: Vec<u64>, detail: String },
    #[error("enumeration cannot use prime {0}: it divides a denominator")]
    BadPrime(u64),
    #[error("brick test indeterminate: End has dimension {0} with no rational eigenvalue found")]
    IndeterminateBrick(usize),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
