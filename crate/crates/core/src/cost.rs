//! Extended integer costs with a dedicated infinity.

use std::fmt;
use std::iter::Sum;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest absolute value accepted for a single finite matrix entry.
///
/// With entries bounded by 2^40, sums over up to 2^10 arcs stay well inside `i64`.
pub const MAX_ENTRY_MAGNITUDE: i64 = 1 << 40;

/// A finite signed integer cost or `Inf` (a blocked arc).
///
/// The derived ordering puts every `Finite` value below `Inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(i64),
    Inf,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Cost::Inf)
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Cost::Finite(v) => Some(v),
            Cost::Inf => None,
        }
    }

    /// Strictly positive finite value.
    pub fn is_positive(self) -> bool {
        matches!(self, Cost::Finite(v) if v > 0)
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => {
                Cost::Finite(a.checked_add(b).expect("cost sum overflowed i64"))
            }
            _ => Cost::Inf,
        }
    }
}

impl Add<i64> for Cost {
    type Output = Cost;

    fn add(self, rhs: i64) -> Cost {
        self + Cost::Finite(rhs)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        iter.fold(Cost::ZERO, |acc, c| acc + c)
    }
}

impl From<i64> for Cost {
    fn from(v: i64) -> Self {
        Cost::Finite(v)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(v) => write!(f, "{v}"),
            Cost::Inf => f.write_str("INF"),
        }
    }
}

// Finite costs serialize as JSON integers, infinity as the string "INF".
impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(v) => serializer.serialize_i64(*v),
            Cost::Inf => serializer.serialize_str("INF"),
        }
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Text(String),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Int(v) => Ok(Cost::Finite(v)),
            Repr::Text(s) if s.eq_ignore_ascii_case("inf") => Ok(Cost::Inf),
            Repr::Text(s) => Err(serde::de::Error::custom(format!("invalid cost {s:?}"))),
        }
    }
}
