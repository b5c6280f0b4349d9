//! Two further parameterized guarantees: density-greedy knapsack, whose
//! value is within `1 - alpha` of optimal for `alpha = max size / capacity`,
//! and the perceptron, which makes at most `1 / mu^2` updates on data with
//! margin `mu`.

mod knapsack;
mod perceptron;

use thiserror::Error;

pub use knapsack::{
    exact_knapsack, greedy_knapsack, Item, KnapsackInstance, KnapsackSolution, MAX_DP_CAPACITY,
    MAX_EXHAUSTIVE_ITEMS,
};
pub use perceptron::{
    margin_dataset, margin_lower_bound, perceptron_train, MarginWitness, PerceptronDataset,
    PerceptronStep, PerceptronTrace, REJECTION_BUDGET_PER_POINT, UNIT_TOLERANCE,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParametricError {
    #[error("capacity must be positive and finite, got {0}")]
    InvalidCapacity(f64),
    #[error("instance has no items")]
    NoItems,
    #[error("item {index} has a negative or non-finite value or size")]
    InvalidItem { index: usize },
    #[error("{0} items exceed the exhaustive-search limit")]
    TooLarge(usize),
    #[error("dataset has no points")]
    NoPoints,
    #[error("{points} points but {labels} labels")]
    LabelCount { points: usize, labels: usize },
    #[error("point {index} has the wrong dimension")]
    Dimension { index: usize },
    #[error("point {index} is not a unit vector")]
    NotUnit { index: usize },
    #[error("label {index} is not -1 or +1")]
    InvalidLabel { index: usize },
    #[error("point {index} violates the recorded margin witness")]
    WitnessViolated { index: usize },
    #[error("margin must lie in (0, 1), got {0}")]
    InvalidMargin(f64),
    #[error("drew {drawn} candidates in d={d} without enough points at margin {mu}; lower the margin or the dimension")]
    RejectionBudget { mu: f64, d: usize, drawn: usize },
    #[error("direction vector is zero")]
    ZeroVector,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}
