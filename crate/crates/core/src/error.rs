use std::path::PathBuf;

use thiserror::Error;

/// Failure raised by an objective function on a particular genotype.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ObjectiveError {
    #[error("genotype has dimension {got}, objective expects {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("move {index} out of range for dimension {dimension}")]
    MoveOutOfRange { index: usize, dimension: usize },
    #[error("{0}")]
    Domain(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("objective failed on population member {index}: {source}")]
    Evaluation {
        index: usize,
        #[source]
        source: ObjectiveError,
    },
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error("evaluation budget exhausted after {evaluations} evaluations")]
    BudgetExhausted { evaluations: u64 },
    #[error("solution {0} has no valid fitness")]
    Unevaluated(usize),
    #[error("empty population")]
    EmptyPopulation,
    #[error("roulette selection needs strictly positive fitness mass")]
    NonPositiveFitness,
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("replacement needs {needed} offspring, got {got}")]
    InsufficientOffspring { needed: usize, got: usize },
    #[error("objective vectors are incompatible (dimension or directions differ)")]
    IncompatibleObjectives,
    #[error("zero variance: {0}")]
    ZeroVariance(&'static str),
    #[error("slot `{slot}`: index {index} out of range (size {size})")]
    SlotIndex {
        slot: String,
        index: usize,
        size: usize,
    },
    #[error("encoding has {got} components, foundry has {expected} slots")]
    EncodingLength { expected: usize, got: usize },
    #[error("slot `{0}` is frozen")]
    SlotFrozen(String),
    #[error("slot `{0}` has no alternatives")]
    EmptySlot(String),
    #[error("foundry has no selected encoding")]
    NotSelected,
    #[error("parameter `{0}` is not bound to a slot or range")]
    UnboundParameter(String),
    #[error("evaluation counts must not decrease within a run ({previous} -> {current})")]
    DecreasingEvaluations { previous: u64, current: u64 },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
