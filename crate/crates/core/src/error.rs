use thiserror::Error;

use crate::exchange::ExchangeSector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero-norm vector: {0}")]
    ZeroNorm(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("non-finite amplitude at index {0}")]
    NonFinite(usize),

    #[error("matrix is not unitary (max |u†u - I| = {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("{what} exceeds cap: {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: String,
        cap: String,
    },

    #[error("state is not in the {0} sector")]
    NotInSector(ExchangeSector),

    #[error("Pauli violation: {0}")]
    PauliViolation(String),

    #[error("invalid occupation symbol {text:?}: {reason}")]
    InvalidSymbol { text: String, reason: String },

    #[error("mode {0} is empty; nothing to remove")]
    EmptyMode(usize),

    #[error("one-particle states are not orthogonal (|<a|b>| = {0:e})")]
    NotOrthogonal(f64),

    #[error("identical wave packets: the antisymmetrized state vanishes")]
    IdenticalPackets,

    #[error("grid under-resolved: density integrates to {0}")]
    UnderResolved(f64),

    #[error("coincidence probability {0:e} too small to condition on")]
    NoCoincidence(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
