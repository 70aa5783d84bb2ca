use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not squarefree")]
    NotSquarefree(u64),
    #[error("invalid discriminant {0}: must be negative and congruent to 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("even Lehmer index {0} is not supported here")]
    EvenIndex(u32),
    #[error("inexact division computing Lehmer number of index {index}")]
    InexactDivision { index: u32 },
    #[error("m must be 0 or 1, got {0}")]
    InvalidM(u32),
    #[error("{0} is not a prime greater than 7")]
    NotLargePrime(u64),
    #[error("elimination check unexpectedly passed: {0}")]
    EliminationFailed(String),
    #[error("tuple does not satisfy the equation: {0}")]
    InvalidSolution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
