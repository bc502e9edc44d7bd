use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("entry count {got} does not match {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, got: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("map is not Hermiticity-preserving (max |C - C^dagger| = {deviation:e})")]
    NotHermiticityPreserving { deviation: f64 },

    #[error("pairing has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("rank {rank} out of range 1..={dim}")]
    RankOutOfRange { rank: usize, dim: usize },

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("operator must be nonzero")]
    ZeroOperator,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("cone expression: {0}")]
    Grammar(String),
}

pub type Result<T> = std::result::Result<T, Error>;
