use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("attempted to invert zero")]
    ZeroInversion,

    #[error("order {from} does not divide {to}")]
    IncompatibleOrder { from: u64, to: u64 },

    #[error("presentation has a free part of rank {0}")]
    InfiniteGroup(usize),

    #[error("operands live in different groups: {0} vs {1}")]
    ParentMismatch(String, String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("invalid pairing: {0}")]
    InvalidPairing(String),

    #[error("pairing is degenerate (radical of order {0})")]
    DegenerateInput(u64),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("scalars do not act by scalar multiplication: {0}")]
    NotWeightOne(String),

    #[error("not a representation: {0}")]
    NotARepresentation(String),

    #[error("rank {rank} exceeds the supported maximum {max}")]
    RankTooLarge { rank: usize, max: usize },

    #[error("no invariant bilinear form")]
    NoInvariantForm,

    #[error("invariant bilinear forms span a space of dimension {0}")]
    NonUniqueInvariantForm(usize),

    #[error("form restricted to a weight block is degenerate")]
    FormDegenerateOnBlock,

    #[error("cocycle does not come from an isotropic splitting: {0}")]
    NoIsotropicSplitting(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}
