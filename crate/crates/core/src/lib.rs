//! Paging under the working-set locality model: locality functions and the
//! fault-rate bounds they imply, LRU/FIFO/optimal replacement, adversarial
//! and random conforming request sequences, and harnesses that check the
//! bounds. Also hosts the density-greedy knapsack and perceptron analyses.

pub mod adversary;
pub mod analysis;
pub mod parametric;
pub mod policies;
pub mod rational;
pub mod sequence;
pub mod simulator;
pub mod working_set;

pub use policies::{CacheConfig, Policy, PolicyKind, RequestOutcome, StartState};
pub use sequence::{PageId, PageSequence};
pub use simulator::SimulationResult;
pub use working_set::{Builtin, Rational, TailRule, WorkingSetFunction};
