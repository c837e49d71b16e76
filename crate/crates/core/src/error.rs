use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("multinomial parts sum to {sum}, expected {n}")]
    PartsMismatch { n: usize, sum: usize },
    #[error("sequence has {got} entries, {needed} required")]
    InsufficientSequence { needed: usize, got: usize },
    #[error("moment of order {order} unavailable ({available} supplied)")]
    MomentUnavailable { order: usize, available: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("distribution {0} does not have bounded support")]
    UnsupportedDistribution(String),
    #[error("evaluation point must be positive")]
    NonPositiveEvaluationPoint,
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("derivative order {k} outside 1..={n}")]
    InvalidOrder { n: usize, k: usize },
    #[error("identity {id} needs parameter `{name}`")]
    MissingParameter { id: String, name: &'static str },
    #[error("series did not reach tolerance within {0} terms")]
    TruncationLimit(usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
