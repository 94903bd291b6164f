use thiserror::Error;

/// Errors produced by the library. Orbital labels in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spectrum must contain at least one eigenvalue")]
    EmptySpectrum,

    #[error("particle count {n_particles} exceeds orbital count {n_orbitals}")]
    TooManyParticles {
        n_particles: usize,
        n_orbitals: usize,
    },

    #[error("particle count must be at least 1")]
    ZeroParticles,

    #[error("determinant basis has {states} states, exceeding the budget of {budget}")]
    BasisTooLarge { states: u128, budget: u64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("not a dual-cone member: orbitals {certificate:?} carry a negative total {total}")]
    NotDualConeMember {
        /// 1-based labels of the offending orbitals (the N smallest eigenvalues).
        certificate: Vec<usize>,
        total: String,
    },

    #[error("state is not normalized: squared norm is {norm_sqr}")]
    UnnormalizedState { norm_sqr: String },

    #[error("invalid scalar `{text}`: {reason}")]
    InvalidScalar { text: String, reason: String },

    #[error("tolerance must be a finite positive number in float mode")]
    BadTolerance,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("gap condition violated: {0}")]
    GapViolation(String),

    #[error("orbital index {orbital} out of range for {n_orbitals} orbitals")]
    OrbitalOutOfRange { orbital: usize, n_orbitals: usize },

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
