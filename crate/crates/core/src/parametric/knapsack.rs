//! Density-greedy knapsack and an exact oracle.
//!
//! Instance files: `capacity C` on the first line, then one `value size`
//! pair per line; `#` starts a comment.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::ParametricError;

/// Largest item count the exhaustive oracle accepts.
pub const MAX_EXHAUSTIVE_ITEMS: usize = 20;
/// Largest integral capacity handled by the dynamic program.
pub const MAX_DP_CAPACITY: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Item {
    pub value: f64,
    pub size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackInstance {
    items: Vec<Item>,
    capacity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnapsackSolution {
    /// Original item indices, ascending.
    pub selected: Vec<usize>,
    pub total_value: f64,
    pub total_size: f64,
}

impl KnapsackInstance {
    pub fn new(items: Vec<Item>, capacity: f64) -> Result<Self, ParametricError> {
        if !(capacity.is_finite() && capacity > 0.0) {
            return Err(ParametricError::InvalidCapacity(capacity));
        }
        if items.is_empty() {
            return Err(ParametricError::NoItems);
        }
        for (index, item) in items.iter().enumerate() {
            let ok = |x: f64| x.is_finite() && x >= 0.0;
            if !ok(item.value) || !ok(item.size) {
                return Err(ParametricError::InvalidItem { index });
            }
        }
        Ok(Self { items, capacity })
    }

    /// `(value, size)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)], capacity: f64) -> Result<Self, ParametricError> {
        let items = pairs
            .iter()
            .map(|&(value, size)| Item { value, size })
            .collect();
        Self::new(items, capacity)
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    /// Largest item size over the capacity.
    pub fn alpha(&self) -> f64 {
        let largest = self.items.iter().map(|it| it.size).fold(0.0, f64::max);
        largest / self.capacity
    }

    fn solution(&self, mut selected: Vec<usize>) -> KnapsackSolution {
        selected.sort_unstable();
        let total_value = selected.iter().map(|&i| self.items[i].value).sum();
        let total_size = selected.iter().map(|&i| self.items[i].size).sum();
        KnapsackSolution {
            selected,
            total_value,
            total_size,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ParametricError> {
        let mut capacity = None;
        let mut items = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: &str| ParametricError::Syntax {
                line: line_no,
                message: message.to_string(),
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let number = |tok: &str| tok.parse::<f64>().map_err(|_| err("expected a number"));
            match (capacity, fields.as_slice()) {
                (None, ["capacity", c]) => capacity = Some(number(c)?),
                (None, _) => return Err(err("first line must be `capacity C`")),
                (Some(_), [v, s]) => items.push(Item {
                    value: number(v)?,
                    size: number(s)?,
                }),
                (Some(_), _) => return Err(err("expected `value size`")),
            }
        }
        let capacity = capacity.ok_or(ParametricError::Syntax {
            line: 0,
            message: "missing `capacity` line".to_string(),
        })?;
        Self::new(items, capacity)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("capacity {}\n", self.capacity);
        for item in &self.items {
            out.push_str(&format!("{} {}\n", item.value, item.size));
        }
        out
    }
}

/// Nonincreasing density, then larger value, then lower index. Zero-size
/// items come first.
fn density_order(items: &[Item], a: usize, b: usize) -> Ordering {
    let (x, y) = (items[a], items[b]);
    let by_density = match (x.size == 0.0, y.size == 0.0) {
        (true, true) => Ordering::Equal,
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        // x.v / x.s > y.v / y.s  <=>  x.v * y.s > y.v * x.s
        (false, false) => (y.value * x.size).total_cmp(&(x.value * y.size)),
    };
    by_density
        .then_with(|| y.value.total_cmp(&x.value))
        .then_with(|| a.cmp(&b))
}

/// Longest prefix of the density order that fits.
pub fn greedy_knapsack(instance: &KnapsackInstance) -> KnapsackSolution {
    let items = instance.items();
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| density_order(items, a, b));
    let mut used = 0.0;
    let mut selected = Vec::new();
    for i in order {
        if used + items[i].size > instance.capacity {
            break;
        }
        used += items[i].size;
        selected.push(i);
    }
    instance.solution(selected)
}

/// Maximum-value feasible subset: a dynamic program when every size and
/// the capacity are small integers, exhaustive search otherwise.
pub fn exact_knapsack(instance: &KnapsackInstance) -> Result<KnapsackSolution, ParametricError> {
    let integral = instance.items.iter().all(|it| it.size.fract() == 0.0);
    let cap = instance.capacity.floor();
    if integral && cap <= MAX_DP_CAPACITY as f64 {
        return Ok(exact_dp(instance, cap as usize));
    }
    if instance.items.len() > MAX_EXHAUSTIVE_ITEMS {
        return Err(ParametricError::TooLarge(instance.items.len()));
    }
    Ok(exact_exhaustive(instance))
}

fn exact_dp(instance: &KnapsackInstance, cap: usize) -> KnapsackSolution {
    let items = instance.items();
    let n = items.len();
    // best[i][c]: best value from items[..i] within capacity c.
    let mut best = vec![vec![0.0f64; cap + 1]; n + 1];
    for i in 1..=n {
        let Item { value, size } = items[i - 1];
        for c in 0..=cap {
            let skip = best[i - 1][c];
            best[i][c] = match usize::try_from(size as u64) {
                Ok(s) if s <= c => skip.max(best[i - 1][c - s] + value),
                _ => skip,
            };
        }
    }
    let mut selected = Vec::new();
    let mut c = cap;
    for i in (1..=n).rev() {
        if best[i][c] != best[i - 1][c] {
            selected.push(i - 1);
            c -= items[i - 1].size as usize;
        }
    }
    instance.solution(selected)
}

fn exact_exhaustive(instance: &KnapsackInstance) -> KnapsackSolution {
    let items = instance.items();
    let mut best_mask = 0u32;
    let mut best_value = -1.0;
    for mask in 0u32..(1 << items.len()) {
        let (mut value, mut size) = (0.0, 0.0);
        for (i, item) in items.iter().enumerate() {
            if mask & (1 << i) != 0 {
                value += item.value;
                size += item.size;
            }
        }
        if size <= instance.capacity && value > best_value {
            best_value = value;
            best_mask = mask;
        }
    }
    let selected = (0..items.len())
        .filter(|i| best_mask & (1 << i) != 0)
        .collect();
    instance.solution(selected)
}
