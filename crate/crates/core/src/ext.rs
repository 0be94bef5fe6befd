use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{LvarError, Result};

/// A real number extended with `+∞` and `−∞`.
///
/// Infima over empty sets are `PosInf` and suprema over empty sets are
/// `NegInf`. Finite payloads are never NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// Sum where a `+∞` operand wins and `−∞ + +∞` is rejected.
    pub fn checked_add(self, other: ExtReal) -> Result<ExtReal> {
        use ExtReal::*;
        match (self, other) {
            (NegInf, PosInf) | (PosInf, NegInf) => {
                Err(LvarError::Domain("undefined sum −∞ + +∞".to_string()))
            }
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Absolute difference for finite pairs; equal infinities have distance 0.
    pub fn distance(self, other: ExtReal) -> f64 {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs(),
            (a, b) if a == b => 0.0,
            _ => f64::INFINITY,
        }
    }

    fn rank(self) -> u8 {
        match self {
            ExtReal::NegInf => 0,
            ExtReal::Finite(_) => 1,
            ExtReal::PosInf => 2,
        }
    }
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtReal::PosInf
        } else if v == f64::NEG_INFINITY {
            ExtReal::NegInf
        } else {
            ExtReal::Finite(v)
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b),
            _ => Some(self.rank().cmp(&other.rank())),
        }
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInf => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInf => write!(f, "inf"),
        }
    }
}

// JSON has no infinities: finite values are numbers, the others the strings "inf" / "-inf".
impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Finite(v) => s.serialize_f64(*v),
            ExtReal::PosInf => s.serialize_str("inf"),
            ExtReal::NegInf => s.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(ExtReal::Finite(v)),
            Raw::Text(t) => match t.as_str() {
                "inf" | "+inf" => Ok(ExtReal::PosInf),
                "-inf" => Ok(ExtReal::NegInf),
                other => Err(serde::de::Error::custom(format!(
                    "expected a number, \"inf\" or \"-inf\", got {other:?}"
                ))),
            },
        }
    }
}
