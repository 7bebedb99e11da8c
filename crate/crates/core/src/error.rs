use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("t must be ≥ r (got t={t}, r={r})")]
    TransmissionBelowReception { t: u32, r: u32 },

    #[error("r must be ≥ 1")]
    ZeroReception,

    #[error("(t,r)=({t},{r}) has no tabulated upper bound")]
    UnsupportedParams { t: u32, r: u32 },

    #[error("the odd-t bound needs an odd t ≥ 3 (got t={0})")]
    EvenTransmission(u32),

    #[error("the odd-t bound needs ℓ > 1 (got ℓ={0})")]
    TileCountTooSmall(u64),

    #[error("no dominating set of size {size} found for T_{n} with (t,r)=({t},{r}): {reason}")]
    TemplateNotFound { t: u32, r: u32, n: u32, size: u64, reason: String },

    #[error("assembled set does not dominate T_{n} for (t,r)=({t},{r}); first undominated vertex {vertex}")]
    WitnessFailed { t: u32, r: u32, n: u32, vertex: crate::LatticePoint },
}

pub type Result<T> = std::result::Result<T, Error>;
