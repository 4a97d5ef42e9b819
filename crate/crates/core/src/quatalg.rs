//! The rational quaternion algebra `H(alpha, beta)` with basis
//! `{1, e1, e2, e3}`:
//!
//! ```text
//!   e1^2 = alpha    e2^2 = beta     e3^2 = -alpha beta
//!   e1 e2 =  e3     e1 e3 =  alpha e2    e2 e3 = -beta e1
//!   e2 e1 = -e3     e3 e1 = -alpha e2    e3 e2 =  beta e1
//! ```
//!
//! Also builds Fibonacci and Lucas quaternions and checks their norm
//! relations.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::identities::CheckResult;
use crate::num::{dec, int_to_rat, rat, rational_string, Integer, Rational, SeqIndex};
use crate::seqcore::{fib_i, lucas_i};

/// Structure constants of `H(alpha, beta)`; both nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraParams {
    #[serde(with = "dec::rational")]
    alpha: Rational,
    #[serde(with = "dec::rational")]
    beta: Rational,
}

impl AlgebraParams {
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::ZeroParameter("alpha"));
        }
        if beta.is_zero() {
            return Err(Error::ZeroParameter("beta"));
        }
        Ok(AlgebraParams { alpha, beta })
    }

    /// Hamilton's quaternions, `H(-1, -1)`.
    pub fn hamilton() -> Self {
        AlgebraParams {
            alpha: rat(-1),
            beta: rat(-1),
        }
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }
}

impl fmt::Display for AlgebraParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}, {}",
            rational_string(&self.alpha),
            rational_string(&self.beta)
        )
    }
}

/// `a1 + a2 e1 + a3 e2 + a4 e3` in a fixed algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quaternion {
    coeffs: [Rational; 4],
    params: AlgebraParams,
}

#[derive(Serialize, Deserialize)]
struct QuaternionRepr {
    #[serde(with = "dec::rational")]
    alpha: Rational,
    #[serde(with = "dec::rational")]
    beta: Rational,
    #[serde(with = "dec::rational_vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for Quaternion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QuaternionRepr {
            alpha: self.params.alpha.clone(),
            beta: self.params.beta.clone(),
            coeffs: self.coeffs.to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = QuaternionRepr::deserialize(d)?;
        let params = AlgebraParams::new(r.alpha, r.beta).map_err(D::Error::custom)?;
        let coeffs: [Rational; 4] = r
            .coeffs
            .try_into()
            .map_err(|_| D::Error::custom("expected four coefficients"))?;
        Ok(Quaternion { coeffs, params })
    }
}

impl Quaternion {
    pub fn new(coeffs: [Rational; 4], params: AlgebraParams) -> Self {
        Quaternion { coeffs, params }
    }

    pub fn from_integers(coeffs: [Integer; 4], params: AlgebraParams) -> Self {
        Quaternion::new(coeffs.map(Rational::from_integer), params)
    }

    pub fn from_i64(coeffs: [i64; 4], params: &AlgebraParams) -> Self {
        Quaternion::new(coeffs.map(rat), params.clone())
    }

    pub fn zero(params: &AlgebraParams) -> Self {
        Quaternion::from_i64([0; 4], params)
    }

    pub fn one(params: &AlgebraParams) -> Self {
        Quaternion::from_i64([1, 0, 0, 0], params)
    }

    /// Basis element `1, e1, e2, e3` for `i = 0..4`.
    pub fn basis(i: usize, params: &AlgebraParams) -> Self {
        let mut c = [0; 4];
        c[i] = 1;
        Quaternion::from_i64(c, params)
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    pub fn params(&self) -> &AlgebraParams {
        &self.params
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Quaternion::new(self.coeffs.clone().map(|c| c * k), self.params.clone())
    }

    fn same_algebra(&self, other: &Quaternion) -> Result<()> {
        if self.params == other.params {
            Ok(())
        } else {
            Err(Error::ParamMismatch {
                left: self.params.to_string(),
                right: other.params.to_string(),
            })
        }
    }

    pub fn add(&self, other: &Quaternion) -> Result<Quaternion> {
        self.same_algebra(other)?;
        Ok(self.zip(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Quaternion) -> Result<Quaternion> {
        self.same_algebra(other)?;
        Ok(self.zip(other, |a, b| a - b))
    }

    fn zip(&self, other: &Quaternion, op: impl Fn(&Rational, &Rational) -> Rational) -> Self {
        let c = &self.coeffs;
        let d = &other.coeffs;
        Quaternion::new(
            [op(&c[0], &d[0]), op(&c[1], &d[1]), op(&c[2], &d[2]), op(&c[3], &d[3])],
            self.params.clone(),
        )
    }

    /// Product by the bilinear extension of the multiplication table.
    pub fn mul(&self, other: &Quaternion) -> Result<Quaternion> {
        self.same_algebra(other)?;
        let (al, be) = (&self.params.alpha, &self.params.beta);
        let ab = al * be;
        let [x0, x1, x2, x3] = &self.coeffs;
        let [y0, y1, y2, y3] = &other.coeffs;
        let c0 = x0 * y0 + al * (x1 * y1) + be * (x2 * y2) - &ab * (x3 * y3);
        let c1 = x0 * y1 + x1 * y0 + be * (x3 * y2 - x2 * y3);
        let c2 = x0 * y2 + x2 * y0 + al * (x1 * y3 - x3 * y1);
        let c3 = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1;
        Ok(Quaternion::new([c0, c1, c2, c3], self.params.clone()))
    }

    pub fn conj(&self) -> Quaternion {
        let [a, b, c, d] = &self.coeffs;
        Quaternion::new([a.clone(), -b, -c, -d], self.params.clone())
    }

    /// `x + conj(x) = 2 a1`.
    pub fn trace(&self) -> Rational {
        &self.coeffs[0] * rat(2)
    }

    /// `a1^2 - alpha a2^2 - beta a3^2 + alpha beta a4^2`.
    pub fn norm(&self) -> Rational {
        let (al, be) = (&self.params.alpha, &self.params.beta);
        let [a, b, c, d] = &self.coeffs;
        a * a - al * (b * b) - be * (c * c) + al * be * (d * d)
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        self.scale(&rat(-1))
    }
}

impl Add for &Quaternion {
    type Output = Result<Quaternion>;

    fn add(self, rhs: &Quaternion) -> Result<Quaternion> {
        Quaternion::add(self, rhs)
    }
}

impl Sub for &Quaternion {
    type Output = Result<Quaternion>;

    fn sub(self, rhs: &Quaternion) -> Result<Quaternion> {
        Quaternion::sub(self, rhs)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.coeffs;
        write!(
            f,
            "{} + {} e1 + {} e2 + {} e3 in H({})",
            rational_string(a),
            rational_string(b),
            rational_string(c),
            rational_string(d),
            self.params
        )
    }
}

pub fn quat_mul(x: &Quaternion, y: &Quaternion) -> Result<Quaternion> {
    x.mul(y)
}

pub fn quat_add(x: &Quaternion, y: &Quaternion) -> Result<Quaternion> {
    x.add(y)
}

pub fn quat_sub(x: &Quaternion, y: &Quaternion) -> Result<Quaternion> {
    x.sub(y)
}

pub fn quat_conj(x: &Quaternion) -> Quaternion {
    x.conj()
}

pub fn quat_trace(x: &Quaternion) -> Rational {
    x.trace()
}

pub fn quat_norm(x: &Quaternion) -> Rational {
    x.norm()
}

fn four_consecutive(n: SeqIndex, seq: fn(i64) -> Result<Integer>) -> Result<[Integer; 4]> {
    let n = n.get();
    if n < 0 {
        return Err(Error::NegativeIndex(n));
    }
    Ok([seq(n)?, seq(n + 1)?, seq(n + 2)?, seq(n + 3)?])
}

/// `f(n) + f(n+1) e1 + f(n+2) e2 + f(n+3) e3`.
pub fn fib_quaternion(n: SeqIndex, params: &AlgebraParams) -> Result<Quaternion> {
    Ok(Quaternion::from_integers(four_consecutive(n, fib_i)?, params.clone()))
}

/// `l(n) + l(n+1) e1 + l(n+2) e2 + l(n+3) e3`.
pub fn lucas_quaternion(n: SeqIndex, params: &AlgebraParams) -> Result<Quaternion> {
    Ok(Quaternion::from_integers(four_consecutive(n, lucas_i)?, params.clone()))
}

/// The two quaternion-valued norm relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormRelation {
    /// `5 n(F_n) = n(L_n)`
    P35_1,
    /// `n(F_n + L_n) = n(F_n) + n(L_n) + 2 (f(2n+7) - f(2n-1))`
    P35_3,
}

impl std::str::FromStr for NormRelation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "P35_1" => Ok(NormRelation::P35_1),
            "P35_3" => Ok(NormRelation::P35_3),
            _ => Err(Error::UnknownId(s.to_string())),
        }
    }
}

fn integral(r: Rational) -> Integer {
    debug_assert!(r.is_integer());
    r.to_integer()
}

/// Evaluates a norm relation in `H(-1, -1)`, where the norm is the sum of
/// the four squared coefficients.
pub fn norm_relation_check(n: SeqIndex, which: NormRelation) -> Result<CheckResult> {
    let h = AlgebraParams::hamilton();
    let fq = fib_quaternion(n, &h)?;
    let lq = lucas_quaternion(n, &h)?;
    let k = n.get();
    let (lhs, rhs) = match which {
        NormRelation::P35_1 => (fq.norm() * rat(5), lq.norm()),
        NormRelation::P35_3 => {
            let tail = int_to_rat(&(fib_i(2 * k + 7)? - fib_i(2 * k - 1)?)) * rat(2);
            (fq.add(&lq)?.norm(), fq.norm() + lq.norm() + tail)
        }
    };
    Ok(CheckResult::equation(k, integral(lhs), integral(rhs)))
}

impl Quaternion {
    /// True when the product with `conj` is the scalar `norm`.
    pub fn norm_is_conj_product(&self) -> bool {
        let p = self.mul(&self.conj()).expect("same algebra");
        p.coeffs[0] == self.norm() && p.coeffs[1..].iter().all(Zero::is_zero)
    }
}
