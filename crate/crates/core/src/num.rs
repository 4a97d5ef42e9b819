//! Exact number carriers shared by every module.
//!
//! `Integer` and `Rational` are the `num` crate's arbitrary-precision types.
//! Both always serialize as decimal strings (`"-17"`, `"15127/5"`) so JSON
//! output never loses precision.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

/// Largest admissible `|n|` for sequence indices.
pub const INDEX_BOUND: i64 = 1_000_000;

/// A sequence index, signed, with `|n| <= INDEX_BOUND`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct SeqIndex(i64);

impl SeqIndex {
    pub fn new(n: i64) -> Result<Self> {
        if n.checked_abs().is_some_and(|a| a <= INDEX_BOUND) {
            Ok(SeqIndex(n))
        } else {
            Err(Error::IndexOutOfBound {
                index: n,
                bound: INDEX_BOUND,
            })
        }
    }

    pub fn get(self) -> i64 {
        self.0
    }

    /// `self + delta`, re-checked against the bound.
    pub fn offset(self, delta: i64) -> Result<Self> {
        SeqIndex::new(self.0.saturating_add(delta))
    }
}

impl TryFrom<i64> for SeqIndex {
    type Error = Error;

    fn try_from(n: i64) -> Result<Self> {
        SeqIndex::new(n)
    }
}

impl<'de> Deserialize<'de> for SeqIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let n = i64::deserialize(d)?;
        SeqIndex::new(n).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for SeqIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn parse_integer(s: &str) -> Result<Integer> {
    Integer::from_str(s.trim()).map_err(|_| Error::Parse {
        input: s.to_string(),
        expected: "an integer",
    })
}

/// Parses `"p"`, `"p/q"` (q nonzero) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let err = || Error::Parse {
        input: s.to_string(),
        expected: "a rational `p` or `p/q`",
    };
    let t = s.trim();
    match t.split_once('/') {
        None => Ok(Rational::from_integer(parse_integer(t).map_err(|_| err())?)),
        Some((p, q)) => {
            let p = parse_integer(p).map_err(|_| err())?;
            let q = parse_integer(q).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// Canonical decimal text of a rational: `"n"` when integral, else `"n/d"`
/// with `d > 0` and `gcd(n, d) = 1`.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

pub fn int_to_rat(n: &Integer) -> Rational {
    Rational::from_integer(n.clone())
}

/// `(-1)^k` for any signed k.
pub fn sign_power(k: i64) -> Integer {
    if k.rem_euclid(2) == 0 {
        Integer::one()
    } else {
        -Integer::one()
    }
}

/// Integer square root test: returns `Some(r)` with `r >= 0` and `r^2 = n`.
pub fn exact_sqrt(n: &Integer) -> Option<Integer> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// serde adaptors writing integers and rationals as decimal strings.
pub mod dec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Integer, D::Error> {
        let s = String::deserialize(d)?;
        parse_integer(&s).map_err(serde::de::Error::custom)
    }

    pub mod rational {
        use super::*;

        pub fn serialize<S: Serializer>(
            v: &Rational,
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            s.serialize_str(&rational_string(v))
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Rational, D::Error> {
            let s = String::deserialize(d)?;
            parse_rational(&s).map_err(serde::de::Error::custom)
        }
    }

    pub mod rational_vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            v: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&rational_string(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
