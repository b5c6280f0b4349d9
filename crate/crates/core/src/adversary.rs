//! Request-sequence constructions that play against a live policy, plus a
//! seeded generator of sequences conforming to a locality function.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::policies::{CacheConfig, Policy, PolicyError, PolicyKind};
use crate::sequence::{PageId, PageSequence};
use crate::working_set::{RecencyList, TailRule, WorkingSetError, WorkingSetFunction};

/// Longest sequence the constructions will materialize.
pub const MAX_CONSTRUCTION_LEN: u64 = 1 << 28;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdversaryError {
    #[error("cache size must be at least {min}, got {k}")]
    CacheTooSmall { k: usize, min: usize },
    #[error("f(2) = 1: the construction needs at least two pages in play")]
    DegenerateFunction,
    #[error("multiplicities m_1..m_{k} are not nondecreasing")]
    NotApproximatelyConcave { k: usize },
    #[error("construction would need {0} requests")]
    TooLong(u64),
    #[error("no admissible page at position {0}")]
    Stuck(usize),
    #[error("need at least one page and one request")]
    EmptyRequest,
    #[error(transparent)]
    Function(#[from] WorkingSetError),
    #[error(transparent)]
    Policy(#[from] PolicyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdversaryOutput {
    pub sequence: PageSequence,
    /// Pages `1..=k+1`.
    pub universe: Vec<PageId>,
    pub predicted_faults: u64,
    pub predicted_length: u64,
    pub target_policy: String,
    /// The cache the target starts with: pages `1..=k`.
    pub warm_start: Vec<PageId>,
}

impl AdversaryOutput {
    pub fn config(&self) -> CacheConfig {
        CacheConfig::warm(self.warm_start.clone())
    }
}

fn universe(k: usize) -> (Vec<PageId>, Vec<PageId>) {
    let universe: Vec<PageId> = (1..=k as PageId + 1).collect();
    let warm = universe[..k].to_vec();
    (universe, warm)
}

/// Lower-bound construction: `k - 1` blocks per repetition, block `j` being
/// `m_{j+1}` requests for whichever page of `1..=k+1` the target is missing
/// when the block starts. The target faults exactly once per block.
pub fn afg_lower_bound(
    kind: PolicyKind,
    f: &WorkingSetFunction,
    k: usize,
    repetitions: usize,
) -> Result<AdversaryOutput, AdversaryError> {
    if k < 2 {
        return Err(AdversaryError::CacheTooSmall { k, min: 2 });
    }
    if f.eval(2) < 2 {
        return Err(AdversaryError::DegenerateFunction);
    }
    if !f.is_concave_through(k as u64) {
        return Err(AdversaryError::NotApproximatelyConcave { k });
    }
    let per_rep = f.inverse(k as u64 + 1)? - 2;
    let predicted_length = per_rep
        .checked_mul(repetitions as u64)
        .filter(|&len| len <= MAX_CONSTRUCTION_LEN)
        .ok_or(AdversaryError::TooLong(
            per_rep.saturating_mul(repetitions as u64),
        ))?;

    let (universe, warm) = universe(k);
    let mut policy = Policy::new(kind, CacheConfig::warm(warm.clone()))?;
    let mut pages = Vec::with_capacity(predicted_length as usize);
    for _ in 0..repetitions {
        for level in 2..=k as u64 {
            let target = policy.missing_page(&universe)?;
            let copies = f.multiplicity(level).expect("bounded by inverse(k+1)");
            for _ in 0..copies {
                policy.on_request(target);
                pages.push(target);
            }
        }
    }
    debug_assert_eq!(pages.len() as u64, predicted_length);
    Ok(AdversaryOutput {
        sequence: PageSequence::new(pages),
        universe,
        predicted_faults: (k as u64 - 1) * repetitions as u64,
        predicted_length,
        target_policy: kind.name().to_string(),
        warm_start: warm,
    })
}

/// Always requests the page the target just lost, so every request faults.
pub fn always_miss(
    kind: PolicyKind,
    k: usize,
    length: usize,
) -> Result<AdversaryOutput, AdversaryError> {
    if k < 1 {
        return Err(AdversaryError::CacheTooSmall { k, min: 1 });
    }
    if length as u64 > MAX_CONSTRUCTION_LEN {
        return Err(AdversaryError::TooLong(length as u64));
    }
    let (universe, warm) = universe(k);
    let mut policy = Policy::new(kind, CacheConfig::warm(warm.clone()))?;
    let mut pages = Vec::with_capacity(length);
    for _ in 0..length {
        let target = policy.missing_page(&universe)?;
        policy.on_request(target);
        pages.push(target);
    }
    Ok(AdversaryOutput {
        sequence: PageSequence::new(pages),
        universe,
        predicted_faults: length as u64,
        predicted_length: length as u64,
        target_policy: kind.name().to_string(),
        warm_start: warm,
    })
}

/// A locality function, cache size and periodic block on which FIFO's fault
/// rate stays above the parameterized optimum while LRU's does not.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FifoWitness {
    pub f: WorkingSetFunction,
    pub k: usize,
    pub block: Vec<PageId>,
}

impl FifoWitness {
    pub fn sequence(&self, repetitions: usize) -> PageSequence {
        PageSequence::repeat(&self.block, repetitions)
    }
}

/// `f = 1,2,3,3,4,4,5,5,...`, `k = 4`, block `1 0 2 0 3 0 4 0`.
pub fn fifo_witness() -> FifoWitness {
    FifoWitness {
        f: fifo_witness_function(),
        k: 4,
        block: vec![1, 0, 2, 0, 3, 0, 4, 0],
    }
}

/// `m = [1, 1, 2, 2]` with every later level also of multiplicity 2.
pub fn fifo_witness_function() -> WorkingSetFunction {
    WorkingSetFunction::new(vec![1, 1, 2, 2], TailRule::ConstantMultiplicity)
        .expect("valid multiplicities")
}

/// Grows a sequence over pages `1..=num_pages`, drawing each request
/// uniformly among the pages that keep every window ending there within `f`.
pub fn random_conforming(
    f: &WorkingSetFunction,
    num_pages: usize,
    length: usize,
    seed: u64,
) -> Result<PageSequence, AdversaryError> {
    if num_pages == 0 || length == 0 {
        return Err(AdversaryError::EmptyRequest);
    }
    let bounds = f.values(length);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut recency = RecencyList::default();
    let mut pages = Vec::with_capacity(length);
    let mut admissible = Vec::with_capacity(num_pages);
    for end in 0..length {
        admissible.clear();
        for page in 1..=num_pages as PageId {
            if fits(&recency, page, end, &bounds) {
                admissible.push(page);
            }
        }
        let &page = admissible
            .choose(&mut rng)
            .ok_or(AdversaryError::Stuck(end))?;
        recency.touch(page, end);
        pages.push(page);
    }
    Ok(PageSequence::new(pages))
}

/// Whether requesting `page` at `end` keeps every window ending at `end`
/// within bounds. Windows that do not end at `end` were checked earlier.
fn fits(recency: &RecencyList, page: PageId, end: usize, bounds: &[u64]) -> bool {
    // After the request, `page` is most recent and the rest keep their order.
    let others = recency
        .entries()
        .iter()
        .filter(|&&(p, _)| p != page)
        .map(|&(_, pos)| pos);
    for (i, start) in others.enumerate() {
        let distinct = i as u64 + 2;
        let length = end - start + 1;
        if distinct > bounds[length - 1] {
            return false;
        }
    }
    true
}
