//! Replays request sequences through policies and tallies faults.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::policies::{belady_run, CacheConfig, Policy, PolicyError, PolicyKind, RequestOutcome};
use crate::sequence::PageId;
use crate::working_set::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("cannot simulate an empty sequence")]
    EmptySequence,
    #[error(transparent)]
    InvalidConfig(#[from] PolicyError),
}

/// Fault statistics for one policy on one sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub policy_name: String,
    pub total_requests: u64,
    pub faults: u64,
    /// Request indices that faulted (detail runs only).
    pub fault_indices: Option<Vec<usize>>,
    /// `(request index, evicted page)` pairs (detail runs only).
    pub eviction_log: Option<Vec<(usize, PageId)>>,
}

impl SimulationResult {
    pub(crate) fn empty(policy_name: &str, detail: bool) -> Self {
        Self {
            policy_name: policy_name.to_string(),
            total_requests: 0,
            faults: 0,
            fault_indices: detail.then(Vec::new),
            eviction_log: detail.then(Vec::new),
        }
    }

    pub(crate) fn record(&mut self, index: usize, outcome: RequestOutcome) {
        self.total_requests += 1;
        if outcome.hit {
            return;
        }
        self.faults += 1;
        if let Some(log) = &mut self.fault_indices {
            log.push(index);
        }
        if let (Some(log), Some(victim)) = (&mut self.eviction_log, outcome.evicted) {
            log.push((index, victim));
        }
    }

    /// `faults / total_requests`, exactly.
    pub fn fault_rate(&self) -> Rational {
        if self.total_requests == 0 {
            return Rational::from_integer(0);
        }
        Rational::new(self.faults, self.total_requests)
    }

    pub fn fault_rate_f64(&self) -> f64 {
        if self.total_requests == 0 {
            return 0.0;
        }
        self.faults as f64 / self.total_requests as f64
    }

    /// `(faults, requests)` after dropping the first `skip` requests, e.g.
    /// one period of a periodic input. Needs a detail run.
    pub fn steady_state(&self, skip: usize) -> Option<(u64, u64)> {
        let indices = self.fault_indices.as_ref()?;
        let faults = indices.iter().filter(|&&i| i >= skip).count() as u64;
        Some((faults, self.total_requests.saturating_sub(skip as u64)))
    }
}

/// Replays `sequence` through a fresh `kind` policy.
pub fn run(
    kind: PolicyKind,
    config: &CacheConfig,
    sequence: &[PageId],
    detail: bool,
) -> Result<SimulationResult, SimError> {
    if sequence.is_empty() {
        return Err(SimError::EmptySequence);
    }
    let mut policy = Policy::new(kind, config.clone())?;
    let mut result = SimulationResult::empty(kind.name(), detail);
    for (i, &page) in sequence.iter().enumerate() {
        result.record(i, policy.on_request(page));
    }
    Ok(result)
}

/// Offline optimum on the same terms as [`run`].
pub fn run_optimal(
    config: &CacheConfig,
    sequence: &[PageId],
    detail: bool,
) -> Result<SimulationResult, SimError> {
    if sequence.is_empty() {
        return Err(SimError::EmptySequence);
    }
    Ok(belady_run(sequence, config, detail)?)
}

/// One result per policy, in order, followed by the optimum when requested.
pub fn compare(
    kinds: &[PolicyKind],
    config: &CacheConfig,
    sequence: &[PageId],
    include_opt: bool,
) -> Result<Vec<SimulationResult>, SimError> {
    let mut results = kinds
        .iter()
        .map(|&kind| run(kind, config, sequence, false))
        .collect::<Result<Vec<_>, _>>()?;
    if include_opt {
        results.push(run_optimal(config, sequence, false)?);
    }
    Ok(results)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn witness(reps: usize) -> Vec<PageId> {
        [1, 0, 2, 0, 3, 0, 4, 0].repeat(reps)
    }

    #[test]
    fn lower_bound_block_rate() {
        let r = run(
            PolicyKind::Lru,
            &CacheConfig::warm(vec![1, 2, 3, 4]),
            &[5, 1, 1, 2, 2],
            true,
        )
        .unwrap();
        assert_eq!(r.faults, 3);
        assert_eq!(r.fault_rate(), Rational::new(3, 5));
        assert_eq!(r.fault_indices.as_deref(), Some(&[0, 1, 3][..]));
        assert_eq!(
            r.eviction_log.as_deref(),
            Some(&[(0, 1), (1, 2), (3, 3)][..])
        );
    }

    #[test]
    fn witness_steady_rates() {
        let seq = witness(50);
        let fifo = run(PolicyKind::Fifo, &CacheConfig::cold(4), &seq, true).unwrap();
        let lru = run(PolicyKind::Lru, &CacheConfig::cold(4), &seq, true).unwrap();
        // one steady cycle: FIFO 5 misses per 8 requests, LRU 4 per 8
        assert_eq!(fifo.steady_state(8), Some((245, 392)));
        assert_eq!(lru.steady_state(8), Some((196, 392)));
        assert!(fifo.fault_rate() > lru.fault_rate());
    }

    #[test]
    fn compare_appends_optimum() {
        let seq = witness(10);
        let results = compare(&PolicyKind::ALL, &CacheConfig::cold(4), &seq, true).unwrap();
        let names: Vec<_> = results.iter().map(|r| r.policy_name.as_str()).collect();
        assert_eq!(names, ["lru", "fifo", "opt"]);
        assert!(results[2].faults <= results[0].faults);
        assert!(results[2].faults <= results[1].faults);
        let single = compare(&[PolicyKind::Lru], &CacheConfig::cold(4), &seq, false).unwrap();
        assert_eq!(
            single,
            vec![run(PolicyKind::Lru, &CacheConfig::cold(4), &seq, false).unwrap()]
        );
    }

    #[test]
    fn warm_identical_sequence_never_faults() {
        let r = run(
            PolicyKind::Fifo,
            &CacheConfig::warm(vec![3, 9]),
            &[9; 20],
            false,
        )
        .unwrap();
        assert_eq!(r.fault_rate(), Rational::from_integer(0));
        assert!(r.fault_indices.is_none());
        assert!(r.steady_state(0).is_none());
    }

    #[test]
    fn errors() {
        assert_eq!(
            run(PolicyKind::Lru, &CacheConfig::cold(2), &[], false).unwrap_err(),
            SimError::EmptySequence
        );
        assert!(matches!(
            run(PolicyKind::Lru, &CacheConfig::cold(0), &[1], false),
            Err(SimError::InvalidConfig(PolicyError::ZeroCapacity))
        ));
    }
}
