use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{WorkingSetError, WorkingSetFunction};
use crate::sequence::PageId;

/// A window with more distinct pages than the function allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Violation {
    /// Zero-based index of the window's first request.
    pub start: usize,
    pub length: usize,
    pub distinct: usize,
    pub allowed: u64,
}

impl Violation {
    fn key(&self) -> (usize, usize) {
        (self.length, self.start)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub conforms: bool,
    /// Smallest violating window by (length, start).
    pub first_violation: Option<Violation>,
}

impl ConformanceReport {
    fn from_violation(first_violation: Option<Violation>) -> Self {
        Self {
            conforms: first_violation.is_none(),
            first_violation,
        }
    }
}

fn keep_smallest(best: &mut Option<Violation>, candidate: Violation) {
    if best.is_none_or(|b| candidate.key() < b.key()) {
        *best = Some(candidate);
    }
}

/// Reference checker: grows every window from every start.
pub fn conforms_naive(sequence: &[PageId], f: &WorkingSetFunction) -> ConformanceReport {
    let bounds = f.values(sequence.len());
    let mut best: Option<Violation> = None;
    for start in 0..sequence.len() {
        let mut seen = HashSet::new();
        for (offset, &page) in sequence[start..].iter().enumerate() {
            seen.insert(page);
            let length = offset + 1;
            let allowed = bounds[length - 1];
            if seen.len() as u64 > allowed {
                keep_smallest(
                    &mut best,
                    Violation {
                        start,
                        length,
                        distinct: seen.len(),
                        allowed,
                    },
                );
            }
        }
    }
    ConformanceReport::from_violation(best)
}

/// Pages ordered by most recent reference, each with its last position.
#[derive(Debug, Default, Clone)]
pub(crate) struct RecencyList {
    entries: Vec<(PageId, usize)>,
}

impl RecencyList {
    pub(crate) fn touch(&mut self, page: PageId, position: usize) {
        if let Some(i) = self.entries.iter().position(|&(p, _)| p == page) {
            self.entries.remove(i);
        }
        self.entries.insert(0, (page, position));
    }

    /// Last positions, most recent first. Entry `d - 1` starts the shortest
    /// window ending at the latest position that holds `d` distinct pages.
    pub(crate) fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|&(_, pos)| pos)
    }

    pub(crate) fn entries(&self) -> &[(PageId, usize)] {
        &self.entries
    }
}

/// Checks only the shortest window ending at each position for each distinct
/// count; any longer window with the same count is allowed whenever the
/// shortest one is, since `f` is nondecreasing.
pub fn conforms(sequence: &[PageId], f: &WorkingSetFunction) -> ConformanceReport {
    let bounds = f.values(sequence.len());
    let mut recency = RecencyList::default();
    let mut best: Option<Violation> = None;
    for (end, &page) in sequence.iter().enumerate() {
        recency.touch(page, end);
        for (i, start) in recency.positions().enumerate() {
            let length = end - start + 1;
            if best.is_some_and(|b| length > b.length) {
                break;
            }
            let distinct = i + 1;
            let allowed = bounds[length - 1];
            if distinct as u64 > allowed {
                keep_smallest(
                    &mut best,
                    Violation {
                        start,
                        length,
                        distinct,
                        allowed,
                    },
                );
            }
        }
    }
    ConformanceReport::from_violation(best)
}

/// Largest distinct-page count over all windows of each length `1..=max_window`:
/// the tightest locality bound the sequence meets.
pub fn empirical_profile(
    sequence: &[PageId],
    max_window: usize,
) -> Result<Vec<u64>, WorkingSetError> {
    if max_window == 0 || max_window > sequence.len() {
        return Err(WorkingSetError::ProfileWindow {
            max_window,
            len: sequence.len(),
        });
    }
    // shortest[d - 1]: shortest window anywhere holding d distinct pages.
    let mut shortest: Vec<usize> = Vec::new();
    let mut recency = RecencyList::default();
    for (end, &page) in sequence.iter().enumerate() {
        recency.touch(page, end);
        for (i, start) in recency.positions().enumerate() {
            let length = end - start + 1;
            match shortest.get_mut(i) {
                Some(s) => *s = (*s).min(length),
                None => shortest.push(length),
            }
        }
    }
    Ok((1..=max_window)
        .map(|n| shortest.iter().filter(|&&len| len <= n).count() as u64)
        .collect())
}
