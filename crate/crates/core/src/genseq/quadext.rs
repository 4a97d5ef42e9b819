//! Exact arithmetic in `Q[sqrt(delta)]` for a fixed positive rational delta.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::num::{dec, exact_sqrt, rational_string, Rational};

/// `u + v sqrt(delta)`.
///
/// Elements only combine with elements over the same `delta`; mixing
/// carriers is a programming error and panics. When `delta` is not a
/// rational square the representation is unique and equality is
/// component-wise. For a square `delta` use [`QuadExt::value_eq`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct QuadExt {
    #[serde(with = "dec::rational")]
    pub u: Rational,
    #[serde(with = "dec::rational")]
    pub v: Rational,
    #[serde(with = "dec::rational")]
    pub delta: Rational,
}

/// `Some(s)` with `s >= 0` and `s^2 = r` when r is the square of a rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = exact_sqrt(r.numer())?;
    let d = exact_sqrt(r.denom())?;
    Some(Rational::new(n, d))
}

impl QuadExt {
    pub fn new(u: Rational, v: Rational, delta: Rational) -> Result<Self> {
        if !delta.is_positive() {
            return Err(Error::NonPositiveDiscriminant(rational_string(&delta)));
        }
        Ok(QuadExt { u, v, delta })
    }

    pub fn rational(u: Rational, delta: &Rational) -> Self {
        QuadExt {
            u,
            v: Rational::zero(),
            delta: delta.clone(),
        }
    }

    /// `sqrt(delta)` itself.
    pub fn root(delta: &Rational) -> Self {
        QuadExt {
            u: Rational::zero(),
            v: Rational::one(),
            delta: delta.clone(),
        }
    }

    fn check_carrier(&self, other: &QuadExt) {
        assert_eq!(self.delta, other.delta, "QuadExt carriers differ");
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    /// `u - v sqrt(delta)`.
    pub fn conj(&self) -> QuadExt {
        QuadExt {
            u: self.u.clone(),
            v: -&self.v,
            delta: self.delta.clone(),
        }
    }

    /// `u^2 - delta v^2`.
    pub fn norm(&self) -> Rational {
        &self.u * &self.u - &self.delta * &self.v * &self.v
    }

    /// Zero as a real number (differs from component-wise zero only when
    /// delta is a square).
    pub fn value_is_zero(&self) -> bool {
        match rational_sqrt(&self.delta) {
            Some(s) => (&self.u + &self.v * s).is_zero(),
            None => self.u.is_zero() && self.v.is_zero(),
        }
    }

    pub fn value_eq(&self, other: &QuadExt) -> bool {
        (self - other).value_is_zero()
    }

    pub fn inv(&self) -> Result<QuadExt> {
        let n = self.norm();
        if n.is_zero() {
            return Err(Error::DegenerateLimit(format!(
                "{self} is not invertible in Q[sqrt({})]",
                rational_string(&self.delta)
            )));
        }
        let c = self.conj();
        Ok(QuadExt {
            u: c.u / &n,
            v: c.v / &n,
            delta: c.delta,
        })
    }

    pub fn div(&self, other: &QuadExt) -> Result<QuadExt> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> QuadExt {
        let mut base = self.clone();
        let mut acc = QuadExt::rational(Rational::one(), &self.delta);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Nearest `f64`.
    pub fn to_f64(&self) -> f64 {
        let u = self.u.to_f64().unwrap_or(f64::NAN);
        let v = self.v.to_f64().unwrap_or(f64::NAN);
        let d = self.delta.to_f64().unwrap_or(f64::NAN);
        u + v * d.sqrt()
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;

    fn add(self, rhs: &QuadExt) -> QuadExt {
        self.check_carrier(rhs);
        QuadExt {
            u: &self.u + &rhs.u,
            v: &self.v + &rhs.v,
            delta: self.delta.clone(),
        }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;

    fn sub(self, rhs: &QuadExt) -> QuadExt {
        self.check_carrier(rhs);
        QuadExt {
            u: &self.u - &rhs.u,
            v: &self.v - &rhs.v,
            delta: self.delta.clone(),
        }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;

    fn mul(self, rhs: &QuadExt) -> QuadExt {
        self.check_carrier(rhs);
        QuadExt {
            u: &self.u * &rhs.u + &self.delta * &self.v * &rhs.v,
            v: &self.u * &rhs.v + &self.v * &rhs.u,
            delta: self.delta.clone(),
        }
    }
}

impl Mul<&Rational> for &QuadExt {
    type Output = QuadExt;

    fn mul(self, k: &Rational) -> QuadExt {
        QuadExt {
            u: &self.u * k,
            v: &self.v * k,
            delta: self.delta.clone(),
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;

    fn neg(self) -> QuadExt {
        QuadExt {
            u: -&self.u,
            v: -&self.v,
            delta: self.delta.clone(),
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}*sqrt({})",
            rational_string(&self.u),
            rational_string(&self.v),
            rational_string(&self.delta)
        )
    }
}
