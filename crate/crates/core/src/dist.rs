//! Extended nonnegative reals used for distances and radii.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use serde::de::{self, Deserializer, Visitor};
use serde::{Serialize, Serializer};

/// A nonnegative distance that may be `+∞`.
///
/// `INF` is ordered above every finite value and addition saturates, so
/// `INF + x == INF` for every `x`. NaN and negative values cannot be
/// constructed.
#[derive(Clone, Copy, PartialEq)]
pub struct Dist(f64);

impl Dist {
    pub const ZERO: Dist = Dist(0.0);
    pub const INF: Dist = Dist(f64::INFINITY);

    /// Panics on NaN or negative input.
    pub fn new(v: f64) -> Dist {
        assert!(!v.is_nan() && v >= 0.0, "invalid distance {v}");
        Dist(v)
    }

    pub fn try_new(v: f64) -> Option<Dist> {
        if v.is_nan() || v < 0.0 {
            None
        } else {
            Some(Dist(v))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_inf(self) -> bool {
        !self.0.is_finite()
    }

    /// Half of the value, `INF / 2 == INF`.
    pub fn half(self) -> Dist {
        Dist(self.0 / 2.0)
    }
}

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl std::hash::Hash for Dist {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // +0.0 only: construction rejects negatives, and -0.0 >= 0.0 holds,
        // so normalise the sign before hashing.
        (self.0 + 0.0).to_bits().hash(state)
    }
}

impl Add for Dist {
    type Output = Dist;
    fn add(self, rhs: Dist) -> Dist {
        Dist(self.0 + rhs.0)
    }
}

impl std::iter::Sum for Dist {
    fn sum<I: Iterator<Item = Dist>>(iter: I) -> Dist {
        iter.fold(Dist::ZERO, |a, b| a + b)
    }
}

impl Default for Dist {
    fn default() -> Self {
        Dist::ZERO
    }
}

impl From<u32> for Dist {
    fn from(v: u32) -> Self {
        Dist(v as f64)
    }
}

impl fmt::Debug for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_inf() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Dist {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_inf() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> serde::Deserialize<'de> for Dist {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct DistVisitor;
        impl Visitor<'_> for DistVisitor {
            type Value = Dist;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Dist, E> {
                Dist::try_new(v).ok_or_else(|| E::custom(format!("invalid distance {v}")))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Dist, E> {
                Ok(Dist(v as f64))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Dist, E> {
                self.visit_f64(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Dist, E> {
                match v {
                    "inf" | "Infinity" | "+inf" => Ok(Dist::INF),
                    _ => Err(E::custom(format!("invalid distance string {v:?}"))),
                }
            }
        }
        d.deserialize_any(DistVisitor)
    }
}
