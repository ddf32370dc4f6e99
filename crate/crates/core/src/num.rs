//! Scalars for the two arithmetic backends.
//!
//! Boxes use arbitrary precision rationals ([`Q`]) and never round. Polytopes
//! use `f64` with the single global tolerance [`EPS`].

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Global tolerance of the float backend, applied symmetrically.
pub const EPS: f64 = 1e-9;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratios of huge integers: fall back to a shifted quotient.
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Exact rational value of a finite double.
pub fn f64_to_q(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| Error::Parse(format!("non-finite number {x}")))
}

/// Parses `"p/q"`, integers, and decimal literals with optional exponent
/// (`"0.125"`, `"1e-3"`) into an exact rational.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Q::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        value = -value;
    }
    Ok(value)
}

/// Parses a JSON number or string into an exact rational. JSON numbers are
/// read from their decimal text, so `0.1` becomes `1/10`.
pub fn q_from_json(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::Number(n) => parse_q(&n.to_string()),
        serde_json::Value::String(s) => parse_q(s),
        other => Err(Error::Parse(format!("expected number or rational string, got {other}"))),
    }
}

/// Decimal expansion with 12 significant digits, used in CSV output.
pub fn q_to_decimal(x: &Q) -> String {
    format_sig(q_to_f64(x))
}

pub fn format_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{:.11e}", x);
    // Normalise through f64 so trailing zeros disappear.
    let v: f64 = s.parse().unwrap_or(x);
    format!("{v}")
}

pub fn q_max(a: &Q, b: &Q) -> Q {
    if a >= b { a.clone() } else { b.clone() }
}

pub fn q_min(a: &Q, b: &Q) -> Q {
    if a <= b { a.clone() } else { b.clone() }
}

pub fn q_pow(x: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// Smallest integer `>= x`.
pub fn q_ceil(x: &Q) -> BigInt {
    x.ceil().to_integer()
}

/// A measured quantity from either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Q),
    Float(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => q_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Q> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(q) => q.is_positive(),
            Scalar::Float(x) => *x > EPS,
        }
    }

    /// Exact comparison when both sides are exact, tolerance-free float
    /// comparison otherwise.
    pub fn compare(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self.to_f64().partial_cmp(&other.to_f64()).unwrap_or(Ordering::Equal),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{q}"),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

impl From<Q> for Scalar {
    fn from(q: Q) -> Self {
        Scalar::Exact(q)
    }
}

impl From<f64> for Scalar {
    fn from(x: f64) -> Self {
        Scalar::Float(x)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => s.serialize_str(&q.to_string()),
            Scalar::Float(x) => s.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::Number(n) => Ok(Scalar::Float(n.as_f64().unwrap_or(f64::NAN))),
            serde_json::Value::String(_) => q_from_json(&v).map(Scalar::Exact).map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom("expected number or rational string")),
        }
    }
}

/// Serde adapters writing rationals as `"p/q"` strings.
pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Q, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        q_from_json(&v).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
            s.collect_seq(xs.iter().map(|x| x.to_string()))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
            let v: Vec<serde_json::Value> = Vec::deserialize(d)?;
            v.iter().map(q_from_json).collect::<Result<_>>().map_err(serde::de::Error::custom)
        }
    }
}
