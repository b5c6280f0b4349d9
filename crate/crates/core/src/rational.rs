//! Exact rationals, rendered as `p/q` strings in serialized output.

use num_rational::Ratio;
use serde::{de, Deserialize, Deserializer, Serializer};

/// Exact non-negative rational.
pub type Rational = Ratio<u64>;

/// `p/q` in lowest terms, including `q = 1`.
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse(s: &str) -> Option<Rational> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    let (p, q) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
    (q != 0).then(|| Rational::new(p, q))
}

pub fn to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `#[serde(with = "crate::rational::as_string")]`
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| de::Error::custom(format!("invalid rational `{s}`")))
    }
}
