//! Abstract groups for d-type sequences, plus three concrete instances.

use std::fmt::Debug;

use num_bigint::Sign;
use num_integer::Integer as _;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::num::{parse_integer, parse_rational, rational_string, Integer, Rational};

/// A group given by its operations. Implementations must be usable from
/// several threads at once without interior mutation.
pub trait GroupOracle: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn op(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn inverse(&self, x: &Self::Elem) -> Self::Elem;

    /// Whether `x` is a valid element of this group.
    fn contains(&self, x: &Self::Elem) -> bool;

    fn eq(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y
    }

    /// `g^k` for any signed k, by square-and-multiply.
    fn pow(&self, g: &Self::Elem, k: &Integer) -> Self::Elem {
        let base = if k.is_negative() {
            self.inverse(g)
        } else {
            g.clone()
        };
        let e = k.magnitude();
        let mut acc = self.identity();
        for i in (0..e.bits()).rev() {
            acc = self.op(&acc, &acc);
            if e.bit(i) {
                acc = self.op(&acc, &base);
            }
        }
        acc
    }

    /// Canonical text of an element.
    fn render(&self, x: &Self::Elem) -> String;

    fn parse(&self, s: &str) -> Result<Self::Elem>;

    fn name(&self) -> String;
}

/// `(Z, +)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegersAdditive;

impl GroupOracle for IntegersAdditive {
    type Elem = Integer;

    fn identity(&self) -> Integer {
        Integer::zero()
    }

    fn op(&self, x: &Integer, y: &Integer) -> Integer {
        x + y
    }

    fn inverse(&self, x: &Integer) -> Integer {
        -x
    }

    fn contains(&self, _x: &Integer) -> bool {
        true
    }

    fn pow(&self, g: &Integer, k: &Integer) -> Integer {
        g * k
    }

    fn render(&self, x: &Integer) -> String {
        x.to_string()
    }

    fn parse(&self, s: &str) -> Result<Integer> {
        parse_integer(s)
    }

    fn name(&self) -> String {
        "integers-additive".into()
    }
}

/// `(Q \ {0}, *)`.
#[derive(Debug, Clone, Copy, Default)]
pub struct RationalsMultiplicative;

impl GroupOracle for RationalsMultiplicative {
    type Elem = Rational;

    fn identity(&self) -> Rational {
        Rational::one()
    }

    fn op(&self, x: &Rational, y: &Rational) -> Rational {
        x * y
    }

    fn inverse(&self, x: &Rational) -> Rational {
        x.recip()
    }

    fn contains(&self, x: &Rational) -> bool {
        !x.is_zero()
    }

    fn render(&self, x: &Rational) -> String {
        rational_string(x)
    }

    fn parse(&self, s: &str) -> Result<Rational> {
        let r = parse_rational(s)?;
        if r.is_zero() {
            return Err(Error::GroupLaw("0 is not a unit of Q".into()));
        }
        Ok(r)
    }

    fn name(&self) -> String {
        "rationals-multiplicative".into()
    }
}

/// The unit group `(Z/mZ)^*`, elements stored as residues in `[0, m)`.
#[derive(Debug, Clone)]
pub struct UnitsMod {
    m: Integer,
}

impl UnitsMod {
    pub fn new(m: impl Into<Integer>) -> Result<Self> {
        let m = m.into();
        if m < Integer::from(2) {
            return Err(Error::GroupLaw(format!("modulus {m} must be at least 2")));
        }
        Ok(UnitsMod { m })
    }

    pub fn modulus(&self) -> &Integer {
        &self.m
    }

    pub fn elem(&self, x: impl Into<Integer>) -> Integer {
        x.into().mod_floor(&self.m)
    }
}

impl GroupOracle for UnitsMod {
    type Elem = Integer;

    fn identity(&self) -> Integer {
        Integer::one().mod_floor(&self.m)
    }

    fn op(&self, x: &Integer, y: &Integer) -> Integer {
        (x * y).mod_floor(&self.m)
    }

    fn inverse(&self, x: &Integer) -> Integer {
        let e = x.extended_gcd(&self.m);
        e.x.mod_floor(&self.m)
    }

    fn contains(&self, x: &Integer) -> bool {
        x.sign() != Sign::Minus && *x < self.m && x.gcd(&self.m).is_one()
    }

    fn pow(&self, g: &Integer, k: &Integer) -> Integer {
        let base = if k.is_negative() {
            self.inverse(g)
        } else {
            g.clone()
        };
        base.modpow(&k.abs(), &self.m)
    }

    fn render(&self, x: &Integer) -> String {
        x.to_string()
    }

    fn parse(&self, s: &str) -> Result<Integer> {
        let x = self.elem(parse_integer(s)?);
        if !self.contains(&x) {
            return Err(Error::GroupLaw(format!("{s} is not a unit mod {}", self.m)));
        }
        Ok(x)
    }

    fn name(&self) -> String {
        format!("units-mod:{}", self.m)
    }
}

/// Spot-checks the group axioms on the supplied elements.
pub fn check_group_laws<G: GroupOracle>(group: &G, elems: &[&G::Elem]) -> Result<()> {
    let e = group.identity();
    for (i, x) in elems.iter().enumerate() {
        if !group.contains(x) {
            return Err(Error::GroupLaw(format!(
                "{} is not an element of {}",
                group.render(x),
                group.name()
            )));
        }
        if !group.eq(&group.op(&e, x), x) || !group.eq(&group.op(x, &e), x) {
            return Err(Error::GroupLaw(format!("identity fails on {}", group.render(x))));
        }
        if !group.eq(&group.op(x, &group.inverse(x)), &e) {
            return Err(Error::GroupLaw(format!("inverse fails on {}", group.render(x))));
        }
        for y in &elems[i..] {
            let l = group.op(&group.op(x, y), x);
            let r = group.op(x, &group.op(y, x));
            if !group.eq(&l, &r) {
                return Err(Error::GroupLaw("associativity fails".into()));
            }
        }
    }
    Ok(())
}
