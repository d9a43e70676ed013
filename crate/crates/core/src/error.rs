use thiserror::Error;

/// Errors raised by the estimators and the data layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid ranking length {r} for {j} objects")]
    RankingLength { r: usize, j: usize },

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("object count {j} exceeds the brute-force cap of {cap}")]
    BruteForceCap { j: usize, cap: usize },

    #[error("outcome space of {size} observations exceeds the enumeration cap of {cap}")]
    EnumerationCap { size: usize, cap: usize },

    #[error("no rankings available for a ranking-only model")]
    NoRankings,

    #[error("no scores available for a score-only model")]
    NoScores,

    #[error("search exhausted its budget of {budget} nodes")]
    NodeBudget { budget: usize },

    #[error("linear program did not converge within {iterations} pivots")]
    LpIterationCap { iterations: usize },

    #[error("input error: {0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
