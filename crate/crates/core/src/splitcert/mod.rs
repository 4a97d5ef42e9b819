//! Split certificates for quaternion algebras `H(a, b)` over Q.
//!
//! `H(a, b)` splits exactly when the conic `a x^2 + b y^2 = z^2` has a
//! nonzero rational point. Each [`FamilyId`] produces a parameter pair
//! built from Fibonacci and Lucas numbers together with an explicit point.
//! [`search_point`] looks for points by brute force and [`hilbert_report`]
//! decides the question independently from local Hilbert symbols.

pub mod factor;
mod hilbert;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use factor::FactorBudget;
pub use hilbert::{decide_split_hilbert, hilbert_report, jacobi, HilbertReport, LocalSymbol, Place, Verdict};

use crate::error::{Error, Result};
use crate::num::{dec, exact_sqrt, int_to_rat, rat, sign_power, Integer, Rational, SeqIndex};
use crate::seqcore::{fib_i, lucas_i};

/// Largest admissible height for [`search_point`].
pub const SEARCH_HEIGHT_LIMIT: u64 = 10_000;

/// The conic `a x^2 + b y^2 = z^2`, with `a, b` nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConicSpec {
    #[serde(with = "dec::rational")]
    a: Rational,
    #[serde(with = "dec::rational")]
    b: Rational,
}

impl ConicSpec {
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroParameter("a"));
        }
        if b.is_zero() {
            return Err(Error::ZeroParameter("b"));
        }
        Ok(ConicSpec { a, b })
    }

    pub fn from_i64(a: i64, b: i64) -> Result<Self> {
        ConicSpec::new(rat(a), rat(b))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `a x^2 + b y^2 - z^2`.
    pub fn residual(&self, p: &RationalPoint) -> Rational {
        &self.a * &p.x * &p.x + &self.b * &p.y * &p.y - &p.z * &p.z
    }
}

/// A projective point `(x : y : z)`; never all zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalPoint {
    x: Rational,
    y: Rational,
    z: Rational,
}

impl RationalPoint {
    pub fn new(x: Rational, y: Rational, z: Rational) -> Result<Self> {
        if x.is_zero() && y.is_zero() && z.is_zero() {
            return Err(Error::Domain {
                what: "rational point".into(),
                n: 0,
                constraint: "not all coordinates zero".into(),
            });
        }
        Ok(RationalPoint { x, y, z })
    }

    pub fn from_integers(x: &Integer, y: &Integer, z: &Integer) -> Result<Self> {
        RationalPoint::new(int_to_rat(x), int_to_rat(y), int_to_rat(z))
    }

    pub fn coords(&self) -> [&Rational; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn has_zero_coordinate(&self) -> bool {
        self.coords().iter().any(|c| c.is_zero())
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Rational> = self.coords().into_iter().cloned().collect();
        dec::rational_vec::serialize(&v, s)
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = dec::rational_vec::deserialize(d)?;
        let [x, y, z]: [Rational; 3] = v
            .try_into()
            .map_err(|_| serde::de::Error::custom("a point has three coordinates"))?;
        RationalPoint::new(x, y, z).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = self.coords().map(crate::num::rational_string);
        write!(f, "({x}, {y}, {z})")
    }
}

/// `a x^2 + b y^2 = z^2` holds exactly and the point is admissible: nonzero
/// (non-strict) or with all coordinates nonzero (strict).
pub fn verify_point(spec: &ConicSpec, pt: &RationalPoint, strict: bool) -> bool {
    let admissible = if strict {
        !pt.has_zero_coordinate()
    } else {
        pt.coords().iter().any(|c| !c.is_zero())
    };
    admissible && spec.residual(pt).is_zero()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyId {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8a,
    F8b,
    F9,
}

struct FamilyInfo {
    tag: &'static str,
    min_n: i64,
    /// Formulas for a, b, x, y, z, used to name degenerate quantities.
    exprs: [&'static str; 5],
}

impl FamilyId {
    pub const ALL: [FamilyId; 10] = [
        FamilyId::F1,
        FamilyId::F2,
        FamilyId::F3,
        FamilyId::F4,
        FamilyId::F5,
        FamilyId::F6,
        FamilyId::F7,
        FamilyId::F8a,
        FamilyId::F8b,
        FamilyId::F9,
    ];

    fn info(self) -> FamilyInfo {
        let (tag, min_n, exprs) = match self {
            FamilyId::F1 => ("1", 0, ["f(10n+5)", "-1", "1", "f(5n+2)", "f(5n+3)"]),
            FamilyId::F2 => ("2", 1, ["l(20n)/5", "-2/5", "1", "1", "f(10n)"]),
            FamilyId::F3 => ("3", 2, ["f(n+1) f(n-1)", "(-1)^(n-1)", "1", "1", "f(n)"]),
            FamilyId::F4 => ("4", 1, ["5", "(-1)^n", "f(n)", "2", "l(n)"]),
            FamilyId::F5 => ("5", 0, ["l(2n) l(2n+2)", "-5", "1", "f(2n+1)", "1"]),
            FamilyId::F6 => ("6", 1, ["2 f(n) f(n+1)", "-f(2n)", "1", "1", "f(n)"]),
            FamilyId::F7 => ("7", 2, ["f(2n)", "-2 f(n) f(n-1)", "1", "1", "f(n)"]),
            FamilyId::F8a => ("8a", 2, ["f(n-1) f(n+1)", "f(n)^2", "2", "1", "l(n)"]),
            FamilyId::F8b => ("8b", 2, ["1", "-f(n-1) f(n+1)", "l(n)", "2", "f(n)"]),
            FamilyId::F9 => ("9", 2, ["f(2n)", "1", "1", "f(n-1)", "f(n+1)"]),
        };
        FamilyInfo { tag, min_n, exprs }
    }

    pub fn tag(self) -> &'static str {
        self.info().tag
    }

    /// Smallest n for which both parameters and all point coordinates are
    /// nonzero.
    pub fn min_n(self) -> i64 {
        self.info().min_n
    }

    /// Largest n whose sequence indices stay within the index bound.
    pub fn max_n(self) -> i64 {
        let b = crate::num::INDEX_BOUND;
        match self {
            FamilyId::F1 => (b - 5) / 10,
            FamilyId::F2 => b / 20,
            FamilyId::F5 | FamilyId::F6 | FamilyId::F7 | FamilyId::F9 => (b - 2) / 2,
            _ => b - 1,
        }
    }

    /// Conic parameters and point as integers-or-fractions, unchecked.
    fn raw(self, n: i64) -> Result<[Rational; 5]> {
        let f = |k: i64| fib_i(k).map(|v| int_to_rat(&v));
        let l = |k: i64| lucas_i(k).map(|v| int_to_rat(&v));
        let one = || rat(1);
        let sgn = |k: i64| int_to_rat(&sign_power(k));
        Ok(match self {
            FamilyId::F1 => [f(10 * n + 5)?, rat(-1), one(), f(5 * n + 2)?, f(5 * n + 3)?],
            FamilyId::F2 => [
                l(20 * n)? / rat(5),
                Rational::new((-2).into(), 5.into()),
                one(),
                one(),
                f(10 * n)?,
            ],
            FamilyId::F3 => [f(n + 1)? * f(n - 1)?, sgn(n - 1), one(), one(), f(n)?],
            FamilyId::F4 => [rat(5), sgn(n), f(n)?, rat(2), l(n)?],
            FamilyId::F5 => [l(2 * n)? * l(2 * n + 2)?, rat(-5), one(), f(2 * n + 1)?, one()],
            FamilyId::F6 => [rat(2) * f(n)? * f(n + 1)?, -f(2 * n)?, one(), one(), f(n)?],
            FamilyId::F7 => [f(2 * n)?, rat(-2) * f(n)? * f(n - 1)?, one(), one(), f(n)?],
            FamilyId::F8a => [f(n - 1)? * f(n + 1)?, f(n)?.pow(2), rat(2), one(), l(n)?],
            FamilyId::F8b => [one(), -(f(n - 1)? * f(n + 1)?), l(n)?, rat(2), f(n)?],
            FamilyId::F9 => [f(2 * n)?, one(), one(), f(n - 1)?, f(n + 1)?],
        })
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        FamilyId::ALL
            .into_iter()
            .find(|k| k.tag() == t)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The conic and point of family `k` at `n`.
pub fn certificate_family(k: FamilyId, n: SeqIndex) -> Result<(ConicSpec, RationalPoint)> {
    let n = n.get();
    let info = k.info();
    if n > k.max_n() {
        return Err(Error::IndexOutOfBound {
            index: n,
            bound: k.max_n(),
        });
    }
    if n < info.min_n {
        let reason = k
            .raw(n)
            .ok()
            .and_then(|vals| {
                let names = ["a", "b", "x", "y", "z"];
                let zeros: Vec<String> = vals
                    .iter()
                    .zip(names.iter().zip(info.exprs))
                    .filter(|(v, _)| v.is_zero())
                    .map(|(_, (name, expr))| format!("{name} = {expr} vanishes"))
                    .collect();
                (!zeros.is_empty()).then(|| zeros.join(", "))
            })
            .unwrap_or_else(|| format!("requires n >= {}", info.min_n));
        return Err(Error::DegenerateFamily {
            family: info.tag.to_string(),
            n,
            reason,
        });
    }
    let [a, b, x, y, z] = k.raw(n)?;
    Ok((ConicSpec::new(a, b)?, RationalPoint::new(x, y, z)?))
}

/// A family certificate as reported to callers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub family: FamilyId,
    pub n: i64,
    #[serde(with = "dec::rational")]
    pub a: Rational,
    #[serde(with = "dec::rational")]
    pub b: Rational,
    pub point: RationalPoint,
    pub verified: bool,
    pub strict: bool,
}

impl Certificate {
    pub fn build(k: FamilyId, n: SeqIndex, strict: bool) -> Result<Self> {
        let (spec, point) = certificate_family(k, n)?;
        let verified = verify_point(&spec, &point, strict);
        Ok(Certificate {
            family: k,
            n: n.get(),
            a: spec.a,
            b: spec.b,
            point,
            verified,
            strict,
        })
    }
}

/// Integer form `p x^2 + q y^2 = r z^2` of the conic, `r > 0`.
fn integer_form(spec: &ConicSpec) -> (Integer, Integer, Integer) {
    let (an, ad) = (spec.a.numer(), spec.a.denom());
    let (bn, bd) = (spec.b.numer(), spec.b.denom());
    (an * bd, bn * ad, ad * bd)
}

fn isqrt_u128(s: u128) -> u128 {
    let mut r = (s as f64).sqrt() as u128;
    while r * r > s {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= s {
        r += 1;
    }
    r
}

fn search_small(p: i128, q: i128, r: i128, h: i128) -> Option<(i128, i128, i128)> {
    (0..=h).into_par_iter().find_map_first(|x| {
        let px = p * x * x;
        (0..=h).find_map(|y| {
            if x == 0 && y == 0 {
                return None;
            }
            let t = px + q * y * y;
            if t < 0 || t % r != 0 {
                return None;
            }
            let s = (t / r) as u128;
            let z = isqrt_u128(s);
            (z * z == s && z as i128 <= h).then_some((x, y, z as i128))
        })
    })
}

fn search_big(p: &Integer, q: &Integer, r: &Integer, h: u64) -> Option<(Integer, Integer, Integer)> {
    let hb = Integer::from(h);
    (0..=h).into_par_iter().find_map_first(|x| {
        let x = Integer::from(x);
        let px = p * &x * &x;
        (0..=h).find_map(|y| {
            let y = Integer::from(y);
            if x.is_zero() && y.is_zero() {
                return None;
            }
            let t = &px + q * &y * &y;
            if t.is_negative() {
                return None;
            }
            let (s, rem) = t.div_rem(r);
            if !rem.is_zero() {
                return None;
            }
            let z = exact_sqrt(&s)?;
            (z <= hb).then(|| (x.clone(), y, z))
        })
    })
}

/// First point `(x, y, z)` with `0 <= x, y, z <= height`, not all zero, in
/// lexicographic order of `(x, y)`. `None` says nothing about splitting.
pub fn search_point(spec: &ConicSpec, height: u64) -> Result<Option<RationalPoint>> {
    if height > SEARCH_HEIGHT_LIMIT {
        return Err(Error::HeightExceeded {
            height,
            limit: SEARCH_HEIGHT_LIMIT,
        });
    }
    if height == 0 {
        return Err(Error::Domain {
            what: "search height".into(),
            n: 0,
            constraint: "height >= 1".into(),
        });
    }
    let (p, q, r) = integer_form(spec);
    let small = |v: &Integer| v.to_i128().filter(|v| v.unsigned_abs() < 1u128 << 90);
    let found = match (small(&p), small(&q), small(&r)) {
        (Some(ps), Some(qs), Some(rs)) if ps.unsigned_abs().max(qs.unsigned_abs()) < 1u128 << 60 => {
            search_small(ps, qs, rs, height as i128)
                .map(|(x, y, z)| (Integer::from(x), Integer::from(y), Integer::from(z)))
        }
        _ => search_big(&p, &q, &r, height),
    };
    found
        .map(|(x, y, z)| RationalPoint::from_integers(&x, &y, &z))
        .transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::parse_rational;

    fn pt(x: i64, y: i64, z: i64) -> RationalPoint {
        RationalPoint::new(rat(x), rat(y), rat(z)).unwrap()
    }

    fn idx(n: i64) -> SeqIndex {
        SeqIndex::new(n).unwrap()
    }

    #[test]
    fn worked_certificates() {
        let cases = [
            (FamilyId::F2, 1, "15127/5", "-2/5", [1, 1, 55]),
            (FamilyId::F4, 2, "5", "1", [1, 2, 3]),
            (FamilyId::F5, 1, "21", "-5", [1, 2, 1]),
            (FamilyId::F9, 2, "3", "1", [1, 1, 2]),
            (FamilyId::F1, 0, "5", "-1", [1, 1, 2]),
        ];
        for (k, n, a, b, [x, y, z]) in cases {
            let (spec, p) = certificate_family(k, idx(n)).unwrap();
            assert_eq!(spec.a(), &parse_rational(a).unwrap(), "family {k}");
            assert_eq!(spec.b(), &parse_rational(b).unwrap(), "family {k}");
            assert_eq!(p, pt(x, y, z), "family {k}");
            assert!(verify_point(&spec, &p, true));
        }
    }

    #[test]
    fn every_family_verifies_to_fifty() {
        for k in FamilyId::ALL {
            for n in k.min_n()..=50 {
                let (spec, p) = certificate_family(k, idx(n)).unwrap();
                assert!(verify_point(&spec, &p, true), "family {k} n={n}");
            }
        }
    }

    #[test]
    fn degenerate_members_name_the_zero() {
        let err = certificate_family(FamilyId::F3, idx(1)).unwrap_err();
        match err {
            Error::DegenerateFamily { family, n, reason } => {
                assert_eq!((family.as_str(), n), ("3", 1));
                assert!(reason.contains("a = f(n+1) f(n-1)"), "{reason}");
            }
            e => panic!("{e}"),
        }
        let err = certificate_family(FamilyId::F2, idx(0)).unwrap_err();
        assert!(err.to_string().contains("z = f(10n)"), "{err}");
        let err = certificate_family(FamilyId::F9, idx(1)).unwrap_err();
        assert!(err.to_string().contains("y = f(n-1)"), "{err}");
        // every n below the range is rejected
        for k in FamilyId::ALL {
            for n in -3..k.min_n() {
                assert!(certificate_family(k, idx(n)).is_err(), "family {k} n={n}");
            }
        }
        assert!(matches!(
            certificate_family(FamilyId::F2, idx(50_001)),
            Err(Error::IndexOutOfBound { .. })
        ));
    }

    #[test]
    fn verification_modes() {
        let s = ConicSpec::from_i64(5, -1).unwrap();
        assert!(verify_point(&s, &pt(1, 1, 2), true));
        let unit = ConicSpec::from_i64(1, 1).unwrap();
        assert!(!verify_point(&unit, &pt(1, 0, 1), true));
        assert!(verify_point(&unit, &pt(1, 0, 1), false));
        assert!(RationalPoint::new(rat(0), rat(0), rat(0)).is_err());
        assert!(!verify_point(&s, &pt(1, 1, 3), false));
    }

    #[test]
    fn search_examples() {
        let s = ConicSpec::from_i64(5, -1).unwrap();
        assert_eq!(search_point(&s, 3).unwrap(), Some(pt(1, 1, 2)));
        let unit = ConicSpec::from_i64(1, 1).unwrap();
        assert_eq!(search_point(&unit, 2).unwrap(), Some(pt(0, 1, 1)));
        let h = ConicSpec::from_i64(-1, -1).unwrap();
        assert_eq!(search_point(&h, 100).unwrap(), None);
        assert!(matches!(search_point(&s, 10_001), Err(Error::HeightExceeded { .. })));
        // denominators are cleared: 3/4 x^2 + 1/4 y^2 = z^2 has (1, 1, 1)
        let q = ConicSpec::new(Rational::new(3.into(), 4.into()), Rational::new(1.into(), 4.into())).unwrap();
        assert_eq!(search_point(&q, 5).unwrap(), Some(pt(0, 2, 1)));
    }

    #[test]
    fn big_search_path_agrees() {
        let s = ConicSpec::from_i64(7, -3).unwrap();
        let (p, q, r) = integer_form(&s);
        let big = search_big(&p, &q, &r, 60);
        let small = search_small(7, -3, 1, 60);
        assert_eq!(
            big,
            small.map(|(x, y, z)| (Integer::from(x), Integer::from(y), Integer::from(z)))
        );
    }

    #[test]
    fn certificate_json() {
        let c = Certificate::build(FamilyId::F4, idx(2), false).unwrap();
        let j = serde_json::to_string(&c).unwrap();
        assert_eq!(
            j,
            r#"{"family":"4","n":2,"a":"5","b":"1","point":["1","2","3"],"verified":true,"strict":false}"#
        );
        let back: Certificate = serde_json::from_str(&j).unwrap();
        assert_eq!(back, c);
        assert_eq!("8A".parse::<FamilyId>().unwrap(), FamilyId::F8a);
        assert!("8".parse::<FamilyId>().is_err());
    }
}
