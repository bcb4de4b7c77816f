use thiserror::Error;

/// Errors raised while constructing strategies or running the analyses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("probability {value} at index {index} is not finite")]
    NonFinite { index: usize, value: f64 },

    #[error("probability {value} at index {index} is negative")]
    NegativeProbability { index: usize, value: f64 },

    #[error("cutter probabilities sum to {sum}, which is not within 1e-12 of 1")]
    NotNormalized { sum: f64 },

    #[error("{name} = {value} is outside [{min}, {max}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    #[error("{0:?} is not a permutation of {{0, 1, 2}}")]
    InvalidPermutation([usize; 3]),

    #[error("food index {0} is not one of 0, 1, 2")]
    InvalidFood(usize),

    #[error("grid has {points} points, more than the limit of {limit}")]
    GridTooLarge { points: u128, limit: u128 },

    #[error("invalid grid configuration: {0}")]
    InvalidGrid(String),

    #[error("candidate label {0:?} is used more than once")]
    DuplicateLabel(String),

    #[error("candidate labels must be nonempty")]
    EmptyLabel,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
