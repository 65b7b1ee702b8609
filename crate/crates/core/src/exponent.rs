//! Exponents `p ∈ [1, ∞]` with `∞` as a distinct value.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{GeoError, Result};

/// An ℓ_p exponent. `Infinity` is its own variant: max-norm semantics differ
/// from any large finite `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub const ONE: Exponent = Exponent::Finite(1.0);
    pub const TWO: Exponent = Exponent::Finite(2.0);
    pub const INF: Exponent = Exponent::Infinity;

    pub fn new(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(GeoError::InvalidExponent(p));
        }
        if p.is_infinite() {
            Ok(Exponent::Infinity)
        } else {
            Ok(Exponent::Finite(p))
        }
    }

    /// `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Self {
        match self {
            Exponent::Infinity => Exponent::ONE,
            Exponent::Finite(1.0) => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Finite(p) => p,
            Exponent::Infinity => f64::INFINITY,
        }
    }

    /// `1/p`, zero for `p = ∞`.
    pub fn recip(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinity)
    }

    pub fn is_one(self) -> bool {
        self == Exponent::ONE
    }

    pub fn is_two(self) -> bool {
        self == Exponent::TWO
    }

    /// ℓ_p norm of a slice.
    pub fn lp_norm(self, x: &[f64]) -> f64 {
        match self {
            Exponent::Infinity => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            Exponent::Finite(1.0) => x.iter().map(|v| v.abs()).sum(),
            Exponent::Finite(2.0) => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Exponent::Finite(p) => {
                // scale by the max entry so large p does not overflow
                let m = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                m * x.iter().map(|v| (v.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => s.serialize_f64(*p),
            Exponent::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let p = match Raw::deserialize(d)? {
            Raw::Num(p) => p,
            Raw::Str(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| serde::de::Error::custom(format!("expected a number >= 1 or \"inf\", got \"{s}\"")))?,
        };
        Exponent::new(p).map_err(serde::de::Error::custom)
    }
}

impl std::str::FromStr for Exponent {
    type Err = GeoError;

    fn from_str(s: &str) -> Result<Self> {
        let p: f64 = s
            .trim()
            .parse()
            .map_err(|_| GeoError::Spec { field: "p".into(), message: format!("expected a number >= 1 or inf, got `{s}`") })?;
        Exponent::new(p)
    }
}
