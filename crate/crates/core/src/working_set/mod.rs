//! Working-set locality functions, sequence conformance and the
//! parameterized fault-rate bounds derived from them.

mod conformance;
mod function;
mod table_file;

use thiserror::Error;

pub(crate) use conformance::RecencyList;
pub use conformance::{conforms, conforms_naive, empirical_profile, ConformanceReport, Violation};
pub use function::{Builtin, Rational, TailRule, WorkingSetFunction};
pub use table_file::{format_table, parse_table};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WorkingSetError {
    #[error("multiplicity table is empty")]
    EmptyTable,
    #[error("m_1 must be 1 (f(1) = 1, f(2) = 2), got {0}")]
    InvalidHead(u64),
    #[error("multiplicity m_{level} is zero")]
    ZeroMultiplicity { level: usize },
    #[error("multiplicities decrease at level {level}; f is not approximately concave")]
    NotApproximatelyConcave { level: usize },
    #[error("raw table entry {index} is zero")]
    ZeroValue { index: usize },
    #[error("normalized function has f(2) = 1; every bound is trivial")]
    Degenerate,
    #[error("f never attains {0}")]
    Unreachable(u64),
    #[error("f^-1({level}) does not fit in 64 bits")]
    Overflow { level: u64 },
    #[error("cache size must be at least 2, got {0}")]
    CacheTooSmall(u64),
    #[error("invalid tail rule `{0}`")]
    InvalidTail(String),
    #[error("unknown builtin function `{0}`")]
    UnknownBuiltin(String),
    #[error("profile window {max_window} outside 1..={len}")]
    ProfileWindow { max_window: usize, len: usize },
    #[error("line {line}: {message}")]
    TableSyntax { line: usize, message: String },
}
