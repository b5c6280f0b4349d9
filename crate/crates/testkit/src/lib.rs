//! Brute-force reference implementations. Deliberately naive and free of
//! any dependency on the workbench crates, so tests can use them as
//! independent oracles.

use std::collections::{BTreeSet, HashSet, VecDeque};

pub type Page = u32;

/// Minimum number of faults over every choice of victim at every eviction.
/// `warm` is the initial cache content (may be empty for a cold start).
pub fn opt_faults_brute_force(seq: &[Page], k: usize, warm: &[Page]) -> u64 {
    fn go(seq: &[Page], k: usize, cache: &mut Vec<Page>) -> u64 {
        let Some((&page, rest)) = seq.split_first() else {
            return 0;
        };
        if cache.contains(&page) {
            return go(rest, k, cache);
        }
        if cache.len() < k {
            cache.push(page);
            let faults = 1 + go(rest, k, cache);
            cache.pop();
            return faults;
        }
        let mut best = u64::MAX;
        for slot in 0..cache.len() {
            let victim = std::mem::replace(&mut cache[slot], page);
            best = best.min(1 + go(rest, k, cache));
            cache[slot] = victim;
        }
        best
    }
    let mut cache = warm.to_vec();
    go(seq, k, &mut cache)
}

/// LRU by list scan: front = least recent.
pub fn lru_faults_reference(seq: &[Page], k: usize, warm: &[Page]) -> u64 {
    let mut cache: Vec<Page> = warm.to_vec();
    let mut faults = 0;
    for &p in seq {
        if let Some(i) = cache.iter().position(|&q| q == p) {
            cache.remove(i);
        } else {
            faults += 1;
            if cache.len() == k {
                cache.remove(0);
            }
        }
        cache.push(p);
    }
    faults
}

/// FIFO by queue: front = first in.
pub fn fifo_faults_reference(seq: &[Page], k: usize, warm: &[Page]) -> u64 {
    let mut queue: VecDeque<Page> = warm.iter().copied().collect();
    let mut faults = 0;
    for &p in seq {
        if !queue.contains(&p) {
            faults += 1;
            if queue.len() == k {
                queue.pop_front();
            }
            queue.push_back(p);
        }
    }
    faults
}

pub fn distinct(window: &[Page]) -> usize {
    window.iter().collect::<HashSet<_>>().len()
}

/// Every window of length `n <= bounds.len()` has at most `bounds[n - 1]`
/// distinct pages. Longer windows are unconstrained.
pub fn satisfies_window_bounds(seq: &[Page], bounds: &[u64]) -> bool {
    (1..=bounds.len().min(seq.len()))
        .all(|n| seq.windows(n).all(|w| distinct(w) as u64 <= bounds[n - 1]))
}

/// Max distinct pages over windows of each length `1..=max_window`.
pub fn profile_by_enumeration(seq: &[Page], max_window: usize) -> Vec<u64> {
    (1..=max_window)
        .map(|n| seq.windows(n).map(distinct).max().unwrap_or(0) as u64)
        .collect()
}

/// Best total value over all subsets with total size at most `capacity`.
pub fn knapsack_by_enumeration(items: &[(f64, f64)], capacity: f64) -> f64 {
    assert!(items.len() <= 24, "enumeration limit");
    let mut best = 0.0f64;
    for mask in 0u32..(1u32 << items.len()) {
        let (mut v, mut s) = (0.0, 0.0);
        for (i, &(value, size)) in items.iter().enumerate() {
            if mask >> i & 1 == 1 {
                v += value;
                s += size;
            }
        }
        if s <= capacity {
            best = best.max(v);
        }
    }
    best
}

/// Best margin over `steps` evenly spaced unit directions in the plane.
pub fn margin_by_direction_search_2d(points: &[[f64; 2]], labels: &[i8], steps: usize) -> f64 {
    (0..steps)
        .map(|s| {
            let theta = std::f64::consts::TAU * s as f64 / steps as f64;
            let (wx, wy) = (theta.cos(), theta.sin());
            points
                .iter()
                .zip(labels)
                .map(|(x, &b)| f64::from(b) * (wx * x[0] + wy * x[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `ceil(sqrt(n))` by integer search.
pub fn ceil_sqrt(n: u64) -> u64 {
    (1..).find(|r| r * r >= n).unwrap()
}

/// `ceil(1 + log2(n))`: smallest `y` with `2^(y-1) >= n`.
pub fn ceil_one_plus_log2(n: u64) -> u64 {
    (1..).find(|&y| 1u64 << (y - 1) >= n).unwrap()
}

/// Every sequence of length `len` over pages `0..pages`.
pub fn all_sequences(pages: u32, len: usize) -> Vec<Vec<Page>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s| {
                (0..pages).map(move |p| {
                    let mut t = s.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

/// Sorted distinct pages, handy for building warm starts.
pub fn page_set(seq: &[Page]) -> Vec<Page> {
    seq.iter()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_opt_small_cases() {
        assert_eq!(opt_faults_brute_force(&[3, 1, 2, 3, 1, 2], 2, &[1, 2]), 3);
        assert_eq!(opt_faults_brute_force(&[1, 2, 3, 1, 2, 3], 2, &[]), 4);
        assert_eq!(opt_faults_brute_force(&[5; 7], 1, &[]), 1);
    }

    #[test]
    fn reference_policies() {
        assert_eq!(lru_faults_reference(&[5, 1, 1, 2, 2], 4, &[1, 2, 3, 4]), 3);
        let w: Vec<Page> = [1, 0, 2, 0, 3, 0, 4, 0].repeat(100);
        assert_eq!(fifo_faults_reference(&w, 4, &[]), 500);
        assert_eq!(lru_faults_reference(&w, 4, &[]), 401);
    }

    #[test]
    fn enumeration_helpers() {
        assert_eq!(all_sequences(3, 2).len(), 9);
        assert_eq!(
            profile_by_enumeration(&[1, 0, 2, 0, 3, 0, 4, 0], 8),
            vec![1, 2, 3, 3, 4, 4, 5, 5]
        );
        assert_eq!(
            knapsack_by_enumeration(&[(10.0, 1.0), (90.0, 10.0)], 10.0),
            90.0
        );
        assert_eq!(ceil_sqrt(10), 4);
        assert_eq!(ceil_one_plus_log2(17), 6);
        assert_eq!(ceil_one_plus_log2(16), 5);
    }
}
