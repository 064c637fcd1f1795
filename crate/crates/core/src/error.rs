use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("root-of-unity denominator {denominator} exceeds the conductor limit {limit}")]
    ConductorTooLarge { denominator: u64, limit: u64 },
    #[error("matrix size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("crossed-product power mismatch: {left} vs {right}")]
    PowerMismatch { left: u64, right: u64 },
    #[error("{n} does not divide {m}")]
    NotDivisible { n: u64, m: u64 },
    #[error("degree {degree} exceeds cap {cap}")]
    DegreeCap { degree: i64, cap: i64 },
    #[error("stage {stage} is outside the configured sequence of length {len}")]
    StageOutOfRange { stage: usize, len: usize },
    #[error("refinement budget of {0} steps exhausted")]
    BudgetExceeded(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
