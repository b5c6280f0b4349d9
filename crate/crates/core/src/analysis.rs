//! Harnesses that measure fault rates against the parameterized bounds.
//!
//! Upper bounds are checked per trial with an additive fault allowance for
//! the partial groups of faults at either end of a sequence; the lower-bound
//! construction is checked for exact equality.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{self, AdversaryError};
use crate::policies::{CacheConfig, PolicyKind};
use crate::sequence::PageId;
use crate::simulator::{self, SimError, SimulationResult};
use crate::working_set::{conforms, Rational, WorkingSetError, WorkingSetFunction};

/// Repetitions below which the separation demo is dominated by warm-up.
pub const MIN_SEPARATION_REPETITIONS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("cache size must be at least 2, got {0}")]
    CacheTooSmall(usize),
    #[error("sequence length {length} is shorter than f^-1(k+1) = {window}")]
    TooShort { length: usize, window: u64 },
    #[error("at least one trial is required")]
    NoTrials,
    #[error(transparent)]
    Function(#[from] WorkingSetError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Simulation(#[from] SimError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundKind {
    /// LRU's fault rate is at most alpha plus boundary slack.
    AlphaLru,
    /// The construction forces a fault rate of exactly alpha.
    AlphaLowerBound,
    /// FIFO's fault rate is at most k / (f^-1(k+1) - 1) plus boundary slack.
    FifoUpper,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub function: String,
    pub k: usize,
    pub policy: PolicyKind,
    pub bound_name: BoundKind,
    #[serde(with = "crate::rational::as_string")]
    pub bound_value: Rational,
    pub trials: usize,
    #[serde(with = "crate::rational::as_string")]
    pub max_observed_rate: Rational,
    /// Allowed excess over `bound_value`, as a rate.
    #[serde(with = "crate::rational::as_string")]
    pub slack_allowed: Rational,
    pub violations: usize,
    /// Lower-bound runs only: whether the construction conforms to `f`.
    pub conforms: Option<bool>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialParams {
    pub trials: usize,
    pub length: usize,
    pub num_pages: usize,
    pub seed: u64,
}

impl TrialParams {
    /// 100 trials of 10^4 requests over `k + 1` pages.
    pub fn defaults(k: usize, seed: u64) -> Self {
        Self {
            trials: 100,
            length: 10_000,
            num_pages: k + 1,
            seed,
        }
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }
}

fn warm_config(k: usize) -> CacheConfig {
    CacheConfig::warm((1..=k as PageId).collect())
}

/// Runs `kind` on `params.trials` random conforming sequences and checks
/// `faults <= rate * length + slack_faults` on every one.
fn verify_upper(
    kind: PolicyKind,
    bound_name: BoundKind,
    f: &WorkingSetFunction,
    k: usize,
    bound_value: Rational,
    slack_faults: u64,
    params: &TrialParams,
) -> Result<BoundReport, AnalysisError> {
    if k < 2 {
        return Err(AnalysisError::CacheTooSmall(k));
    }
    if params.trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    let window = f.inverse(k as u64 + 1)?;
    if (params.length as u64) < window {
        return Err(AnalysisError::TooShort {
            length: params.length,
            window,
        });
    }
    let config = warm_config(k);
    let faults = (0..params.trials)
        .into_par_iter()
        .map(|trial| {
            let seq = adversary::random_conforming(
                f,
                params.num_pages,
                params.length,
                params.trial_seed(trial),
            )?;
            Ok(simulator::run(kind, &config, &seq, false)?.faults)
        })
        .collect::<Result<Vec<u64>, AnalysisError>>()?;

    let length = params.length as u64;
    // faults * den <= num * length + slack * den, in u128 to stay exact.
    let within = |f: u64| {
        let den = *bound_value.denom() as u128;
        let num = *bound_value.numer() as u128;
        f as u128 * den <= num * length as u128 + slack_faults as u128 * den
    };
    let violations = faults.iter().filter(|&&f| !within(f)).count();
    let max_faults = faults.iter().copied().max().unwrap_or(0);
    Ok(BoundReport {
        function: f.to_string(),
        k,
        policy: kind,
        bound_name,
        bound_value,
        trials: params.trials,
        max_observed_rate: Rational::new(max_faults, length),
        slack_allowed: Rational::new(slack_faults, length),
        violations,
        conforms: None,
        pass: violations == 0,
    })
}

/// LRU on random conforming sequences: at most `alpha * length + 2(k - 1)` faults.
pub fn verify_lru_upper(
    f: &WorkingSetFunction,
    k: usize,
    params: &TrialParams,
) -> Result<BoundReport, AnalysisError> {
    let alpha = f.alpha(k as u64)?;
    let slack = 2 * (k as u64).saturating_sub(1);
    verify_upper(
        PolicyKind::Lru,
        BoundKind::AlphaLru,
        f,
        k,
        alpha,
        slack,
        params,
    )
}

/// FIFO on random conforming sequences: at most `fifo_bound * length + 2k` faults.
pub fn verify_fifo_upper(
    f: &WorkingSetFunction,
    k: usize,
    params: &TrialParams,
) -> Result<BoundReport, AnalysisError> {
    let bound = f.fifo_bound(k as u64)?;
    verify_upper(
        PolicyKind::Fifo,
        BoundKind::FifoUpper,
        f,
        k,
        bound,
        2 * k as u64,
        params,
    )
}

/// Builds the lower-bound construction against `kind`, replays it through a
/// fresh policy, and requires a fault rate of exactly alpha and conformance.
pub fn verify_lower_bound(
    kind: PolicyKind,
    f: &WorkingSetFunction,
    k: usize,
    repetitions: usize,
) -> Result<BoundReport, AnalysisError> {
    if k < 2 {
        return Err(AnalysisError::CacheTooSmall(k));
    }
    let alpha = f.alpha(k as u64)?;
    let out = adversary::afg_lower_bound(kind, f, k, repetitions)?;
    let result = simulator::run(kind, &out.config(), &out.sequence, false)?;
    let observed = result.fault_rate();
    let conforming = conforms(&out.sequence, f).conforms;
    let exact = observed == alpha
        && result.faults == out.predicted_faults
        && result.total_requests == out.predicted_length;
    Ok(BoundReport {
        function: f.to_string(),
        k,
        policy: kind,
        bound_name: BoundKind::AlphaLowerBound,
        bound_value: alpha,
        trials: 1,
        max_observed_rate: observed,
        slack_allowed: Rational::from_integer(0),
        violations: usize::from(!(exact && conforming)),
        conforms: Some(conforming),
        pass: exact && conforming,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub repetitions: usize,
    #[serde(with = "crate::rational::as_string")]
    pub alpha: Rational,
    /// FIFO's steady-state rate on the witness block.
    #[serde(with = "crate::rational::as_string")]
    pub fifo_target: Rational,
    /// Warm-up allowance `1 / repetitions` below `fifo_target`.
    #[serde(with = "crate::rational::as_string")]
    pub epsilon: Rational,
    pub lru: SimulationResult,
    pub fifo: SimulationResult,
    pub opt: SimulationResult,
    pub sufficient_length: bool,
    pub pass: bool,
}

/// LRU, FIFO and the optimum on `repetitions` copies of the FIFO witness.
///
/// Passes when `fifo_rate >= 5/8 - epsilon > alpha >= lru_rate` and the
/// run is long enough for warm-up to be negligible.
pub fn separation_demo(repetitions: usize) -> Result<SeparationReport, AnalysisError> {
    let witness = adversary::fifo_witness();
    let alpha = witness.f.alpha(witness.k as u64)?;
    let seq = witness.sequence(repetitions.max(1));
    let config = CacheConfig::cold(witness.k);
    let lru = simulator::run(PolicyKind::Lru, &config, &seq, false)?;
    let fifo = simulator::run(PolicyKind::Fifo, &config, &seq, false)?;
    let opt = simulator::run_optimal(&config, &seq, false)?;
    let fifo_target = Rational::new(5, 8);
    let epsilon = Rational::new(1, repetitions.max(1) as u64);
    let floor = if epsilon > fifo_target {
        Rational::from_integer(0)
    } else {
        fifo_target - epsilon
    };
    let sufficient_length = repetitions >= MIN_SEPARATION_REPETITIONS;
    let pass = sufficient_length
        && fifo.fault_rate() >= floor
        && floor > alpha
        && alpha >= lru.fault_rate();
    Ok(SeparationReport {
        repetitions,
        alpha,
        fifo_target,
        epsilon,
        lru,
        fifo,
        opt,
        sufficient_length,
        pass,
    })
}
