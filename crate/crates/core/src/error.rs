use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sample is empty")]
    EmptySample,

    #[error("non-finite value {0}")]
    NonFiniteValue(f64),

    #[error("invalid atom mass {0}: masses must be finite and strictly positive")]
    InvalidMass(f64),

    #[error("mixture has no components")]
    EmptyMixture,

    #[error("non-finite mixture coefficient {0}")]
    NonFiniteCoefficient(f64),

    #[error("invalid period {0}: must be finite and > 0")]
    InvalidPeriod(f64),

    #[error("period {period} is smaller than the support width {width}")]
    PeriodTooSmall { period: f64, width: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("characteristic vectors disagree on grid (N or period)")]
    MismatchedGrid,

    #[error("total mass {0} differs from 1 by more than 1e-6")]
    TotalMassError(f64),

    #[error("alpha {0} outside (0, 1)")]
    AlphaOutOfRange(f64),

    #[error("mass floor {floor} outside [0, 1/N) for N = {bins}")]
    InvalidMassFloor { floor: f64, bins: usize },

    #[error("only {0} of the mass survived atomization")]
    AllMassDropped(f64),

    #[error("block length {block_length} does not divide sample size {n}")]
    BlockLengthMismatch { n: usize, block_length: usize },

    #[error("block length must be at least 1")]
    InvalidBlockLength,

    #[error("enumeration of {outcomes} outcomes exceeds limit {limit}")]
    EnumerationTooLarge { outcomes: f64, limit: u64 },

    #[error("replicate count must be at least 1")]
    InvalidReplicates,
}
