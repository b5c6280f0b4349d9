//! Deterministic cache-replacement policies and the offline optimum.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sequence::PageId;
use crate::simulator::SimulationResult;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolicyError {
    #[error("cache capacity must be at least 1")]
    ZeroCapacity,
    #[error("warm start lists {got} pages, expected exactly {k}")]
    WarmSize { k: usize, got: usize },
    #[error("warm start repeats page {0}")]
    WarmDuplicate(PageId),
    #[error("cache holds {len} of {k} pages")]
    CacheNotFull { len: usize, k: usize },
    #[error("universe leaves {0} pages outside the cache, expected exactly one")]
    NotExactlyOneMissing(usize),
    #[error("unknown policy `{0}`")]
    UnknownPolicy(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Lru,
    Fifo,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 2] = [PolicyKind::Lru, PolicyKind::Fifo];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Lru => "lru",
            PolicyKind::Fifo => "fifo",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lru" => Ok(PolicyKind::Lru),
            "fifo" => Ok(PolicyKind::Fifo),
            _ => Err(PolicyError::UnknownPolicy(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StartState {
    Cold,
    /// Exactly `k` distinct pages; the first is least recent / first in.
    Warm(Vec<PageId>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheConfig {
    pub k: usize,
    pub start: StartState,
}

impl CacheConfig {
    pub fn cold(k: usize) -> Self {
        Self {
            k,
            start: StartState::Cold,
        }
    }

    pub fn warm(pages: Vec<PageId>) -> Self {
        Self {
            k: pages.len(),
            start: StartState::Warm(pages),
        }
    }

    pub fn validate(&self) -> Result<(), PolicyError> {
        if self.k == 0 {
            return Err(PolicyError::ZeroCapacity);
        }
        if let StartState::Warm(pages) = &self.start {
            if pages.len() != self.k {
                return Err(PolicyError::WarmSize {
                    k: self.k,
                    got: pages.len(),
                });
            }
            let mut seen = HashSet::new();
            if let Some(&dup) = pages.iter().find(|&&p| !seen.insert(p)) {
                return Err(PolicyError::WarmDuplicate(dup));
            }
        }
        Ok(())
    }

    pub(crate) fn warm_pages(&self) -> &[PageId] {
        match &self.start {
            StartState::Cold => &[],
            StartState::Warm(pages) => pages,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RequestOutcome {
    pub hit: bool,
    pub evicted: Option<PageId>,
}

impl RequestOutcome {
    const HIT: Self = Self {
        hit: true,
        evicted: None,
    };

    fn miss(evicted: Option<PageId>) -> Self {
        Self {
            hit: false,
            evicted,
        }
    }
}

/// Recency order: the smallest stamp is the least recently referenced page.
#[derive(Debug, Clone, Default)]
struct LruState {
    stamps: HashMap<PageId, u64>,
    order: BTreeMap<u64, PageId>,
    clock: u64,
}

impl LruState {
    fn insert_fresh(&mut self, page: PageId) {
        self.clock += 1;
        self.stamps.insert(page, self.clock);
        self.order.insert(self.clock, page);
    }

    fn request(&mut self, page: PageId, k: usize) -> RequestOutcome {
        if let Some(stamp) = self.stamps.get(&page).copied() {
            self.order.remove(&stamp);
            self.insert_fresh(page);
            return RequestOutcome::HIT;
        }
        let evicted = if self.stamps.len() >= k {
            let (_, victim) = self.order.pop_first().expect("full cache is nonempty");
            self.stamps.remove(&victim);
            Some(victim)
        } else {
            None
        };
        self.insert_fresh(page);
        RequestOutcome::miss(evicted)
    }
}

/// Insertion order only; hits do not reorder.
#[derive(Debug, Clone, Default)]
struct FifoState {
    queue: VecDeque<PageId>,
    members: HashSet<PageId>,
}

impl FifoState {
    fn insert_fresh(&mut self, page: PageId) {
        self.queue.push_back(page);
        self.members.insert(page);
    }

    fn request(&mut self, page: PageId, k: usize) -> RequestOutcome {
        if self.members.contains(&page) {
            return RequestOutcome::HIT;
        }
        let evicted = if self.queue.len() >= k {
            let victim = self.queue.pop_front().expect("full cache is nonempty");
            self.members.remove(&victim);
            Some(victim)
        } else {
            None
        };
        self.insert_fresh(page);
        RequestOutcome::miss(evicted)
    }
}

#[derive(Debug, Clone)]
enum State {
    Lru(LruState),
    Fifo(FifoState),
}

/// A replacement policy running against a cache of fixed capacity.
#[derive(Debug, Clone)]
pub struct Policy {
    kind: PolicyKind,
    config: CacheConfig,
    state: State,
}

impl Policy {
    pub fn new(kind: PolicyKind, config: CacheConfig) -> Result<Self, PolicyError> {
        config.validate()?;
        let mut policy = Self {
            kind,
            state: State::Lru(LruState::default()),
            config,
        };
        policy.reset();
        Ok(policy)
    }

    /// Returns to the configured start state.
    pub fn reset(&mut self) {
        let warm = self.config.warm_pages();
        self.state = match self.kind {
            PolicyKind::Lru => {
                let mut s = LruState::default();
                warm.iter().for_each(|&p| s.insert_fresh(p));
                State::Lru(s)
            }
            PolicyKind::Fifo => {
                let mut s = FifoState::default();
                warm.iter().for_each(|&p| s.insert_fresh(p));
                State::Fifo(s)
            }
        };
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn config(&self) -> &CacheConfig {
        &self.config
    }

    pub fn capacity(&self) -> usize {
        self.config.k
    }

    pub fn len(&self) -> usize {
        match &self.state {
            State::Lru(s) => s.stamps.len(),
            State::Fifo(s) => s.queue.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.config.k
    }

    pub fn contains(&self, page: PageId) -> bool {
        match &self.state {
            State::Lru(s) => s.stamps.contains_key(&page),
            State::Fifo(s) => s.members.contains(&page),
        }
    }

    /// Cached pages in eviction order (next victim first).
    pub fn contents(&self) -> Vec<PageId> {
        match &self.state {
            State::Lru(s) => s.order.values().copied().collect(),
            State::Fifo(s) => s.queue.iter().copied().collect(),
        }
    }

    pub fn on_request(&mut self, page: PageId) -> RequestOutcome {
        let k = self.config.k;
        match &mut self.state {
            State::Lru(s) => s.request(page, k),
            State::Fifo(s) => s.request(page, k),
        }
    }

    /// The single page of `universe` (of size `k + 1`) absent from a full cache.
    pub fn missing_page(&self, universe: &[PageId]) -> Result<PageId, PolicyError> {
        if !self.is_full() {
            return Err(PolicyError::CacheNotFull {
                len: self.len(),
                k: self.config.k,
            });
        }
        let missing: BTreeSet<PageId> = universe
            .iter()
            .copied()
            .filter(|&p| !self.contains(p))
            .collect();
        let cached_outside = self.contents().into_iter().any(|p| !universe.contains(&p));
        match (missing.len(), cached_outside) {
            (1, false) => Ok(*missing.first().expect("one element")),
            (n, _) => Err(PolicyError::NotExactlyOneMissing(n)),
        }
    }
}

/// Furthest-in-the-future replacement on a fully known sequence.
///
/// Pages never requested again are evicted first, smallest id on ties.
pub fn belady_run(
    sequence: &[PageId],
    config: &CacheConfig,
    detail: bool,
) -> Result<SimulationResult, PolicyError> {
    config.validate()?;
    let never = usize::MAX;
    let mut next_use = vec![never; sequence.len()];
    let mut upcoming: HashMap<PageId, usize> = HashMap::new();
    for (i, &page) in sequence.iter().enumerate().rev() {
        next_use[i] = upcoming.insert(page, i).unwrap_or(never);
    }

    // Max element is the victim: furthest next use, then smallest page.
    let mut ranked: BTreeSet<(usize, Reverse<PageId>)> = BTreeSet::new();
    let mut cached: HashMap<PageId, usize> = HashMap::new();
    for &page in config.warm_pages() {
        let next = upcoming.get(&page).copied().unwrap_or(never);
        cached.insert(page, next);
        ranked.insert((next, Reverse(page)));
    }

    let mut result = SimulationResult::empty("opt", detail);
    for (i, &page) in sequence.iter().enumerate() {
        let next = next_use[i];
        if let Some(old) = cached.get(&page).copied() {
            ranked.remove(&(old, Reverse(page)));
            ranked.insert((next, Reverse(page)));
            cached.insert(page, next);
            result.record(i, RequestOutcome::HIT);
            continue;
        }
        let evicted = if cached.len() >= config.k {
            let (_, Reverse(victim)) = ranked.pop_last().expect("full cache is nonempty");
            cached.remove(&victim);
            Some(victim)
        } else {
            None
        };
        cached.insert(page, next);
        ranked.insert((next, Reverse(page)));
        result.record(i, RequestOutcome::miss(evicted));
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(policy: &mut Policy, pages: &[PageId]) -> Vec<RequestOutcome> {
        pages.iter().map(|&p| policy.on_request(p)).collect()
    }

    fn miss(evicted: Option<PageId>) -> RequestOutcome {
        RequestOutcome::miss(evicted)
    }

    #[test]
    fn warm_lru_evicts_first_listed() {
        let mut lru = Policy::new(PolicyKind::Lru, CacheConfig::warm(vec![1, 2])).unwrap();
        assert_eq!(lru.on_request(3), miss(Some(1)));
    }

    #[test]
    fn fifo_ignores_hits_lru_does_not() {
        let mut fifo = Policy::new(PolicyKind::Fifo, CacheConfig::warm(vec![1, 2])).unwrap();
        assert_eq!(
            run(&mut fifo, &[1, 3]),
            vec![RequestOutcome::HIT, miss(Some(1))]
        );
        let mut lru = Policy::new(PolicyKind::Lru, CacheConfig::warm(vec![1, 2])).unwrap();
        assert_eq!(
            run(&mut lru, &[1, 3]),
            vec![RequestOutcome::HIT, miss(Some(2))]
        );
    }

    #[test]
    fn lru_trace_of_lower_bound_block() {
        let mut lru = Policy::new(PolicyKind::Lru, CacheConfig::warm(vec![1, 2, 3, 4])).unwrap();
        assert_eq!(
            run(&mut lru, &[5, 1, 1, 2, 2]),
            vec![
                miss(Some(1)),
                miss(Some(2)),
                RequestOutcome::HIT,
                miss(Some(3)),
                RequestOutcome::HIT
            ]
        );
    }

    #[test]
    fn cold_start_compulsory_misses() {
        for kind in PolicyKind::ALL {
            let mut p = Policy::new(kind, CacheConfig::cold(3)).unwrap();
            assert!(p.is_empty());
            assert_eq!(run(&mut p, &[7, 8, 9]), vec![miss(None); 3]);
            assert_eq!(p.on_request(9), RequestOutcome::HIT);
            assert!(p.is_full());
        }
    }

    #[test]
    fn invalid_configs() {
        assert_eq!(
            Policy::new(PolicyKind::Lru, CacheConfig::cold(0)).unwrap_err(),
            PolicyError::ZeroCapacity
        );
        let cfg = CacheConfig {
            k: 3,
            start: StartState::Warm(vec![1, 2]),
        };
        assert!(matches!(
            Policy::new(PolicyKind::Fifo, cfg),
            Err(PolicyError::WarmSize { k: 3, got: 2 })
        ));
        assert_eq!(
            Policy::new(PolicyKind::Fifo, CacheConfig::warm(vec![1, 1])).unwrap_err(),
            PolicyError::WarmDuplicate(1)
        );
    }

    #[test]
    fn missing_page_cases() {
        let universe = [1, 2, 3, 4, 5];
        let mut p = Policy::new(PolicyKind::Lru, CacheConfig::warm(vec![1, 2, 3, 4])).unwrap();
        assert_eq!(p.missing_page(&universe).unwrap(), 5);
        p.on_request(5);
        assert_eq!(p.missing_page(&universe).unwrap(), 1);
        let cold = Policy::new(PolicyKind::Lru, CacheConfig::cold(4)).unwrap();
        assert!(matches!(
            cold.missing_page(&universe),
            Err(PolicyError::CacheNotFull { len: 0, k: 4 })
        ));
        assert!(matches!(
            p.missing_page(&[1, 2, 3, 4, 5, 6]),
            Err(PolicyError::NotExactlyOneMissing(2))
        ));
    }

    #[test]
    fn reset_restores_warm_state() {
        let mut p = Policy::new(PolicyKind::Fifo, CacheConfig::warm(vec![1, 2])).unwrap();
        p.on_request(3);
        p.reset();
        assert_eq!(p.contents(), vec![1, 2]);
    }

    #[test]
    fn belady_examples() {
        let r = belady_run(&[3, 1, 2, 3, 1, 2], &CacheConfig::warm(vec![1, 2]), true).unwrap();
        assert_eq!(r.faults, 3);
        assert_eq!(
            r.eviction_log.as_deref(),
            Some(&[(0, 2), (2, 1), (4, 3)][..])
        );
        let r = belady_run(&[6; 9], &CacheConfig::cold(1), false).unwrap();
        assert_eq!(r.faults, 1);
        let r = belady_run(&[1, 2, 3, 1, 2, 3], &CacheConfig::cold(2), false).unwrap();
        assert_eq!(r.faults, 4);
    }

    #[test]
    fn belady_tie_break_smallest_dead_page() {
        let r = belady_run(&[9, 1], &CacheConfig::warm(vec![5, 3, 1]), true).unwrap();
        assert_eq!(r.eviction_log.unwrap(), vec![(0, 3)]);
    }
}
