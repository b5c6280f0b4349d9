use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::WorkingSetError;
pub use crate::rational::Rational;

/// How the multiplicity sequence continues past the stored table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRule {
    /// `f` grows by exactly one per window length beyond the table (`m_y = 1`).
    UnitGrowth,
    /// Every level past the table repeats the last stored multiplicity.
    ConstantMultiplicity,
    /// `m_{y+1} = m_y + step` past the table.
    Arithmetic(u64),
    /// `m_{y+1} = m_y * ratio` past the table.
    Geometric(u64),
}

impl fmt::Display for TailRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailRule::UnitGrowth => f.write_str("unit"),
            TailRule::ConstantMultiplicity => f.write_str("constant"),
            TailRule::Arithmetic(step) => write!(f, "arithmetic {step}"),
            TailRule::Geometric(ratio) => write!(f, "geometric {ratio}"),
        }
    }
}

impl FromStr for TailRule {
    type Err = WorkingSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut parts = s.split_whitespace();
        let name = parts.next().unwrap_or("");
        let arg = parts.next();
        let bad = || WorkingSetError::InvalidTail(s.trim().to_string());
        let number = |arg: Option<&str>| -> Result<u64, WorkingSetError> {
            arg.ok_or_else(bad)?.parse::<u64>().map_err(|_| bad())
        };
        let rule = match name {
            "unit" => TailRule::UnitGrowth,
            "constant" => TailRule::ConstantMultiplicity,
            "arithmetic" => TailRule::Arithmetic(number(arg)?),
            "geometric" => {
                let ratio = number(arg)?;
                if ratio == 0 {
                    return Err(bad());
                }
                TailRule::Geometric(ratio)
            }
            _ => return Err(bad()),
        };
        let has_arg = matches!(rule, TailRule::Arithmetic(_) | TailRule::Geometric(_));
        if parts.next().is_some() || (!has_arg && arg.is_some()) {
            return Err(bad());
        }
        Ok(rule)
    }
}

/// Closed-form locality functions addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    /// `f(n) = n`.
    Identity,
    /// `f(n) = ceil(sqrt(n))`.
    SqrtCeil,
    /// `f(n) = ceil(1 + log2(n))`.
    Log2Ceil,
}

impl Builtin {
    pub const ALL: [Builtin; 3] = [Builtin::Identity, Builtin::SqrtCeil, Builtin::Log2Ceil];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Identity => "identity",
            Builtin::SqrtCeil => "sqrt_ceil",
            Builtin::Log2Ceil => "log2_ceil",
        }
    }
}

impl FromStr for Builtin {
    type Err = WorkingSetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "identity" | "id" => Ok(Builtin::Identity),
            "sqrt" | "sqrt_ceil" => Ok(Builtin::SqrtCeil),
            "log2" | "log2_ceil" | "log" => Ok(Builtin::Log2Ceil),
            other => Err(WorkingSetError::UnknownBuiltin(other.to_string())),
        }
    }
}

/// A working-set function `f`: window length `n` maps to the maximum number
/// of distinct pages allowed in any `n` consecutive requests.
///
/// Stored by multiplicities: `m_y` is the number of window lengths `n` with
/// `f(n) = y`. Since `m_1 = 1`, every function has `f(1) = 1`, `f(2) = 2`,
/// and grows by at most one per step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WorkingSetFunction {
    multiplicities: Vec<u64>,
    tail: TailRule,
}

impl WorkingSetFunction {
    /// Builds an approximately concave function: `m_1 = 1` and the stored
    /// multiplicities are nondecreasing.
    pub fn new(multiplicities: Vec<u64>, tail: TailRule) -> Result<Self, WorkingSetError> {
        let f = Self::from_levels(multiplicities, tail)?;
        if let Some(level) = f.multiplicities.windows(2).position(|w| w[1] < w[0]) {
            return Err(WorkingSetError::NotApproximatelyConcave { level: level + 2 });
        }
        Ok(f)
    }

    /// Validates the head and positivity only; concavity is not required.
    pub(crate) fn from_levels(
        multiplicities: Vec<u64>,
        tail: TailRule,
    ) -> Result<Self, WorkingSetError> {
        match multiplicities.first() {
            None => return Err(WorkingSetError::EmptyTable),
            Some(&1) => {}
            Some(&m) => return Err(WorkingSetError::InvalidHead(m)),
        }
        if let Some(i) = multiplicities.iter().position(|&m| m == 0) {
            return Err(WorkingSetError::ZeroMultiplicity { level: i + 1 });
        }
        if tail == TailRule::Geometric(0) {
            return Err(WorkingSetError::InvalidTail(tail.to_string()));
        }
        Ok(Self {
            multiplicities,
            tail,
        })
    }

    pub fn builtin(which: Builtin) -> Self {
        let (multiplicities, tail) = match which {
            Builtin::Identity => (vec![1], TailRule::UnitGrowth),
            // ceil(sqrt(n)) = y on n in ((y-1)^2, y^2], so m_y = 2y - 1 for y >= 2.
            Builtin::SqrtCeil => (vec![1, 3], TailRule::Arithmetic(2)),
            // ceil(1 + log2 n) = y on n in (2^(y-2), 2^(y-1)], so m_y = 2^(y-2).
            Builtin::Log2Ceil => (vec![1, 1], TailRule::Geometric(2)),
        };
        Self {
            multiplicities,
            tail,
        }
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    /// `m_y`, or `None` when it does not fit in a `u64`.
    pub fn multiplicity(&self, y: u64) -> Option<u64> {
        assert!(y >= 1, "levels start at 1");
        let stored = self.multiplicities.len() as u64;
        if y <= stored {
            return Some(self.multiplicities[(y - 1) as usize]);
        }
        let last = *self.multiplicities.last().expect("nonempty");
        let beyond = y - stored;
        match self.tail {
            TailRule::UnitGrowth => Some(1),
            TailRule::ConstantMultiplicity => Some(last),
            TailRule::Arithmetic(step) => step.checked_mul(beyond)?.checked_add(last),
            TailRule::Geometric(ratio) => {
                let exp = u32::try_from(beyond).ok()?;
                ratio.checked_pow(exp)?.checked_mul(last)
            }
        }
    }

    /// True when `m_1 <= m_2 <= ... <= m_level`.
    pub fn is_concave_through(&self, level: u64) -> bool {
        let mut prev = 0;
        for y in 1..=level {
            match self.multiplicity(y) {
                Some(m) if m >= prev => prev = m,
                _ => return false,
            }
        }
        true
    }

    /// True when the multiplicities are nondecreasing at every level.
    pub fn is_approximately_concave(&self) -> bool {
        let table_ok = self.multiplicities.windows(2).all(|w| w[0] <= w[1]);
        let tail_ok = match self.tail {
            TailRule::UnitGrowth => *self.multiplicities.last().expect("nonempty") == 1,
            TailRule::ConstantMultiplicity | TailRule::Arithmetic(_) => true,
            TailRule::Geometric(ratio) => ratio >= 1,
        };
        table_ok && tail_ok
    }

    /// `f(n)` for `n >= 1`. Saturates at `u64::MAX` only for astronomically long windows.
    pub fn eval(&self, n: u64) -> u64 {
        assert!(n >= 1, "window lengths start at 1");
        let mut covered = 0u64;
        for (i, &m) in self.multiplicities.iter().enumerate() {
            covered = covered.saturating_add(m);
            if covered >= n {
                return i as u64 + 1;
            }
        }
        let stored = self.multiplicities.len() as u64;
        let rest = n - covered;
        let last = *self.multiplicities.last().expect("nonempty");
        match self.tail {
            TailRule::UnitGrowth => stored.saturating_add(rest),
            TailRule::ConstantMultiplicity => stored.saturating_add(rest.div_ceil(last)),
            TailRule::Arithmetic(_) | TailRule::Geometric(_) => {
                let mut y = stored;
                loop {
                    y += 1;
                    match self.multiplicity(y) {
                        Some(m) => {
                            covered = covered.saturating_add(m);
                            if covered >= n {
                                return y;
                            }
                        }
                        None => return y,
                    }
                }
            }
        }
    }

    /// `f(1), ..., f(n)` as a vector indexed from zero.
    pub fn values(&self, n: usize) -> Vec<u64> {
        let mut out = Vec::with_capacity(n);
        let mut y = 1u64;
        while out.len() < n {
            let m = self.multiplicity(y).unwrap_or(u64::MAX);
            let take = usize::try_from(m).unwrap_or(usize::MAX).min(n - out.len());
            out.extend(std::iter::repeat_n(y, take));
            y += 1;
        }
        out
    }

    /// Smallest window length `n` with `f(n) = y`.
    pub fn inverse(&self, y: u64) -> Result<u64, WorkingSetError> {
        if y == 0 {
            return Err(WorkingSetError::Unreachable(0));
        }
        let stored = self.multiplicities.len() as u64;
        let overflow = || WorkingSetError::Overflow { level: y };
        // Number of window lengths with f(n) < y.
        let below = if y - 1 <= stored {
            self.multiplicities[..(y - 1) as usize]
                .iter()
                .try_fold(0u64, |acc, &m| acc.checked_add(m))
                .ok_or_else(overflow)?
        } else {
            let table: u64 = self
                .multiplicities
                .iter()
                .try_fold(0u64, |acc, &m| acc.checked_add(m))
                .ok_or_else(overflow)?;
            let extra_levels = y - 1 - stored;
            let last = *self.multiplicities.last().expect("nonempty");
            let extra = match self.tail {
                TailRule::UnitGrowth => Some(extra_levels),
                TailRule::ConstantMultiplicity => extra_levels.checked_mul(last),
                TailRule::Arithmetic(_) | TailRule::Geometric(_) => (stored + 1..y)
                    .try_fold(0u64, |acc, level| {
                        acc.checked_add(self.multiplicity(level)?)
                    }),
            };
            extra
                .and_then(|e| e.checked_add(table))
                .ok_or_else(overflow)?
        };
        below.checked_add(1).ok_or_else(overflow)
    }

    /// The parameterized fault rate `(k - 1) / (f^-1(k + 1) - 2)`.
    pub fn alpha(&self, k: u64) -> Result<Rational, WorkingSetError> {
        if k < 2 {
            return Err(WorkingSetError::CacheTooSmall(k));
        }
        let window = self.inverse(k + 1)?;
        Ok(Rational::new(k - 1, window - 2))
    }

    /// FIFO's fault-rate ceiling `k / (f^-1(k + 1) - 1)`.
    pub fn fifo_bound(&self, k: u64) -> Result<Rational, WorkingSetError> {
        if k < 2 {
            return Err(WorkingSetError::CacheTooSmall(k));
        }
        let window = self.inverse(k + 1)?;
        Ok(Rational::new(k, window - 1))
    }

    /// Closure of an arbitrary value table over window lengths `1..=K` into the
    /// unique largest unit-step nondecreasing function with the same
    /// conforming sequences.
    ///
    /// Windows longer than the table are unconstrained, so the result grows
    /// by one per step past it.
    pub fn normalize(raw: &[u64]) -> Result<Self, WorkingSetError> {
        if raw.is_empty() {
            return Err(WorkingSetError::EmptyTable);
        }
        if let Some(i) = raw.iter().position(|&v| v == 0) {
            return Err(WorkingSetError::ZeroValue { index: i + 1 });
        }
        let len = raw.len();
        // A window of length n contains windows of every length j <= n, and
        // has at most n distinct pages anyway.
        let mut capped = vec![0u64; len];
        let mut suffix_min = u64::MAX;
        for n in (1..=len).rev() {
            suffix_min = suffix_min.min(raw[n - 1]);
            capped[n - 1] = suffix_min.min(n as u64);
        }
        // Lipschitz closure: f'(n) = min_{m <= n} capped(m) + n - m.
        let mut closed = vec![0u64; len];
        let mut running = u64::MAX;
        for n in 1..=len {
            running = running.saturating_add(1).min(capped[n - 1]);
            closed[n - 1] = running;
        }
        if len >= 2 && closed[1] == 1 {
            return Err(WorkingSetError::Degenerate);
        }
        let mut multiplicities: Vec<u64> = Vec::new();
        for (i, &value) in closed.iter().enumerate() {
            if i == 0 || value != closed[i - 1] {
                multiplicities.push(1);
            } else {
                *multiplicities.last_mut().expect("pushed") += 1;
            }
        }
        Self::from_levels(multiplicities, TailRule::UnitGrowth)
    }
}

impl fmt::Display for WorkingSetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(b) = Builtin::ALL
            .into_iter()
            .find(|&b| Self::builtin(b) == *self)
        {
            return f.write_str(b.name());
        }
        f.write_str("m=[")?;
        for (i, m) in self.multiplicities.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "] tail={}", self.tail)
    }
}
