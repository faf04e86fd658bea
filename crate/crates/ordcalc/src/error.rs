use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("carrier size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("fixpoint failed to stabilize within {rounds} rounds")]
    FixpointDiverged { rounds: usize },

    #[error("invalid fixture spec: {0}")]
    InvalidFixture(String),

    #[error("monoid axioms violated: {0}")]
    InvalidMonoid(String),

    #[error("seed relation is not left prec-continuous; witness ({0}, {1})")]
    NotLeftContinuous(usize, usize),

    #[error("precondition unmet: {0}")]
    Precondition(String),

    #[error("pair is not admissible; witness ({0}, {1})")]
    NotAdmissible(usize, usize),

    #[error("no factorization: pair exceeds the kernel at ({0}, {1})")]
    NoFactorization(usize, usize),

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("group generator is not a W-automorphism: {0}")]
    InvalidAction(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
