use thiserror::Error;

/// Everything that can go wrong while evaluating a Charlier quantity.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("branch error: {0}")]
    Branch(String),
    #[error("log-gamma pole at {0}")]
    Pole(String),
    #[error("indeterminate gamma ratio: both arguments are poles")]
    Indeterminate,
    #[error("precision exhausted after escalating to {bits} bits")]
    PrecisionExhausted { bits: usize },
    #[error("explicit sum is capped at n = {cap}, use the recurrence instead (requested n = {n})")]
    SumCap { n: usize, cap: usize },
    #[error("Poisson tail beyond k_max is too large, try k_max = {suggested}")]
    TailInsufficient { suggested: usize },
    #[error("w-ladder breaks down: w_{k} vanishes")]
    LadderBreakdown { k: usize },
    #[error("t = {t} is outside the left turning-point neighbourhood (radius {radius}), use the band or interior formula")]
    OutOfNeighborhood { t: f64, radius: f64 },
    #[error("neither exponential dominates (ratio {ratio:.3e}), use the two-term or real-axis form")]
    AmbiguousDominance { ratio: f64 },
    #[error("edge zero j = {j} falls outside the turning-point neighbourhood")]
    OutOfRange { j: usize },
    #[error("zero scan incomplete: found {found} of {expected}")]
    IncompleteScan { found: usize, expected: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
