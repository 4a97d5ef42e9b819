//! Fibonacci-type sequences over a linear binary operation
//! `x * y = A x + B y`, their Binet-type closed form evaluated exactly in
//! `Q[sqrt(A^2 + 4B)]`, and d-type sequences in abelian groups.

mod group;
mod quadext;

use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use group::{check_group_laws, GroupOracle, IntegersAdditive, RationalsMultiplicative, UnitsMod};
pub use quadext::{rational_sqrt, QuadExt};

use crate::error::{Error, Result};
use crate::num::{dec, rat, rational_string, Integer, Rational, SeqIndex};

/// Upper bound on `n` for [`relation_seq`].
pub const RELATION_STEPS: u64 = 100_000;
/// Upper bound on `n` for [`binet_general`].
pub const BINET_STEPS: u64 = 10_000;
/// Upper bound on `n` for [`dtype_seq`] and [`dtype_closed_form`].
pub const DTYPE_STEPS: u64 = 1_000;

/// The binary operation `x * y = A x + B y` on `Q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearRelation {
    #[serde(with = "dec::rational")]
    pub a: Rational,
    #[serde(with = "dec::rational")]
    pub b: Rational,
}

impl LinearRelation {
    pub fn new(a: Rational, b: Rational) -> Self {
        LinearRelation { a, b }
    }

    pub fn from_i64(a: i64, b: i64) -> Self {
        LinearRelation::new(rat(a), rat(b))
    }

    /// `A^2 + 4B`.
    pub fn discriminant(&self) -> Rational {
        &self.a * &self.a + &self.b * rat(4)
    }

    pub fn apply(&self, x: &Rational, y: &Rational) -> Rational {
        &self.a * x + &self.b * y
    }

    fn positive_discriminant(&self) -> Result<Rational> {
        let d = self.discriminant();
        if d.is_positive() {
            Ok(d)
        } else {
            Err(Error::NonPositiveDiscriminant(rational_string(&d)))
        }
    }

    /// The characteristic roots `((A + sqrt D)/2, (A - sqrt D)/2)`.
    pub fn roots(&self) -> Result<(QuadExt, QuadExt)> {
        let d = self.positive_discriminant()?;
        let half = Rational::new(1.into(), 2.into());
        let a = QuadExt::rational(self.a.clone(), &d);
        let r = QuadExt::root(&d);
        Ok((&(&a + &r) * &half, &(&a - &r) * &half))
    }
}

/// Which neighbour comes first in the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `phi(n) = phi(n-1) * phi(n-2)`
    Left,
    /// `phi(n) = phi(n-2) * phi(n-1)`
    Right,
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Parse {
                input: s.into(),
                expected: "`left` or `right`",
            }),
        }
    }
}

fn step_limit(n: u64, limit: u64) -> Result<()> {
    if n > limit {
        Err(Error::TooManySteps { n, limit })
    } else {
        Ok(())
    }
}

/// The whole prefix `phi(0..=n)`.
pub fn relation_prefix(
    rel: &LinearRelation,
    a0: &Rational,
    b1: &Rational,
    side: Side,
    n: u64,
) -> Result<Vec<Rational>> {
    step_limit(n, RELATION_STEPS)?;
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(a0.clone());
    if n >= 1 {
        out.push(b1.clone());
    }
    for k in 2..=n as usize {
        let (prev, prev2) = (&out[k - 1], &out[k - 2]);
        let next = match side {
            Side::Left => rel.apply(prev, prev2),
            Side::Right => rel.apply(prev2, prev),
        };
        out.push(next);
    }
    Ok(out)
}

/// `phi(n)` by direct iteration.
pub fn relation_seq(
    rel: &LinearRelation,
    a0: &Rational,
    b1: &Rational,
    side: Side,
    n: u64,
) -> Result<Rational> {
    step_limit(n, RELATION_STEPS)?;
    let (mut lo, mut hi) = (a0.clone(), b1.clone());
    if n == 0 {
        return Ok(lo);
    }
    for _ in 1..n {
        let next = match side {
            Side::Left => rel.apply(&hi, &lo),
            Side::Right => rel.apply(&lo, &hi),
        };
        lo = hi;
        hi = next;
    }
    Ok(hi)
}

/// Binet-type closed form of the left sequence,
/// `phi(n) = [(-b + a beta) alpha^n + (b - a alpha) beta^n] / (beta - alpha)`,
/// evaluated exactly in `Q[sqrt(D)]`.
pub fn binet_general(rel: &LinearRelation, a0: &Rational, b1: &Rational, n: u64) -> Result<QuadExt> {
    step_limit(n, BINET_STEPS)?;
    let (alpha, beta) = rel.roots()?;
    let d = alpha.delta.clone();
    let a = QuadExt::rational(a0.clone(), &d);
    let b = QuadExt::rational(b1.clone(), &d);
    let c_alpha = &(&a * &beta) - &b;
    let c_beta = &b - &(&a * &alpha);
    let num = &(&c_alpha * &alpha.pow(n)) + &(&c_beta * &beta.pow(n));
    num.div(&(&beta - &alpha))
}

/// Dominant root together with the empirical ratio it is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioLimit {
    /// `(A + sqrt D) / 2`.
    pub limit: f64,
    /// `phi(201) / phi(200)`.
    pub empirical: f64,
    /// `|phi(201)/phi(200) - limit|`.
    pub deviation: f64,
}

/// Index pair used for the empirical ratio.
pub const RATIO_PROBE: u64 = 200;

/// `lim phi(n+1)/phi(n)` for the left sequence.
///
/// Requires a positive discriminant, `|alpha| > |beta|` (that is `A > 0`)
/// and a nonzero coefficient on `alpha^n`; otherwise the ratio either has
/// no limit or converges to `beta`.
pub fn ratio_limit(rel: &LinearRelation, a0: &Rational, b1: &Rational) -> Result<RatioLimit> {
    let (alpha, beta) = rel.roots()?;
    if rel.a.is_zero() {
        return Err(Error::DegenerateLimit(
            "|alpha| = |beta| (A = 0): no dominant root".into(),
        ));
    }
    if rel.a.is_negative() {
        return Err(Error::DegenerateLimit(
            "|beta| > |alpha| (A < 0): the ratio tends to the smaller root".into(),
        ));
    }
    let d = alpha.delta.clone();
    let coeff = &(&QuadExt::rational(a0.clone(), &d) * &beta) - &QuadExt::rational(b1.clone(), &d);
    if coeff.value_is_zero() {
        return Err(Error::DegenerateLimit(
            "degenerate coefficient: b = a*beta, the alpha-term vanishes".into(),
        ));
    }
    let prefix = relation_prefix(rel, a0, b1, Side::Left, RATIO_PROBE + 1)?;
    let (lo, hi) = (&prefix[RATIO_PROBE as usize], &prefix[RATIO_PROBE as usize + 1]);
    if lo.is_zero() {
        return Err(Error::DegenerateLimit(format!("phi({RATIO_PROBE}) = 0")));
    }
    let empirical = (hi / lo).to_f64().unwrap_or(f64::NAN);
    let limit = alpha.to_f64();
    Ok(RatioLimit {
        limit,
        empirical,
        deviation: (empirical - limit).abs(),
    })
}

/// Integer recurrence `d(n) = a d(n-1) + b d(n-2)`, `d(0) = alpha`,
/// `d(1) = beta`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DTypeSpec {
    #[serde(with = "dec")]
    pub a: Integer,
    #[serde(with = "dec")]
    pub b: Integer,
    #[serde(with = "dec")]
    pub alpha: Integer,
    #[serde(with = "dec")]
    pub beta: Integer,
}

impl DTypeSpec {
    pub fn new(a: i64, b: i64, alpha: i64, beta: i64) -> Self {
        DTypeSpec {
            a: a.into(),
            b: b.into(),
            alpha: alpha.into(),
            beta: beta.into(),
        }
    }

    /// `a = b = 1`, `alpha = 0`, `beta = 1`.
    pub fn fibonacci() -> Self {
        DTypeSpec::new(1, 1, 0, 1)
    }

    /// `a = b = 1`, `alpha = 2`, `beta = 1`.
    pub fn lucas() -> Self {
        DTypeSpec::new(1, 1, 2, 1)
    }

    /// `d(-1) = (beta - a alpha) / b`, when that is an integer.
    pub fn backward(&self) -> Result<Integer> {
        let num = &self.beta - &self.a * &self.alpha;
        if self.b.is_zero() {
            return Err(Error::NonIntegralBackward {
                numerator: num.to_string(),
                denominator: "0".into(),
            });
        }
        let (q, r) = num.div_rem(&self.b);
        if !r.is_zero() {
            return Err(Error::NonIntegralBackward {
                numerator: num.to_string(),
                denominator: self.b.to_string(),
            });
        }
        Ok(q)
    }
}

impl fmt::Display for DTypeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d(n) = {} d(n-1) + {} d(n-2), d(0) = {}, d(1) = {}",
            self.a, self.b, self.alpha, self.beta
        )
    }
}

type Mat = [[Integer; 2]; 2];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    [
        [
            &x[0][0] * &y[0][0] + &x[0][1] * &y[1][0],
            &x[0][0] * &y[0][1] + &x[0][1] * &y[1][1],
        ],
        [
            &x[1][0] * &y[0][0] + &x[1][1] * &y[1][0],
            &x[1][0] * &y[0][1] + &x[1][1] * &y[1][1],
        ],
    ]
}

/// `d(n)` for `n >= -1`, by companion-matrix powering.
pub fn d_seq(spec: &DTypeSpec, n: SeqIndex) -> Result<Integer> {
    let n = n.get();
    match n {
        i64::MIN..=-2 => Err(Error::Domain {
            what: "d-sequence".into(),
            n,
            constraint: "n >= -1".into(),
        }),
        -1 => spec.backward(),
        0 => Ok(spec.alpha.clone()),
        _ => {
            // [d(k+1), d(k)]^T = M^k [d(1), d(0)]^T with M = [[a, b], [1, 0]]
            let mut e = (n - 1) as u64;
            let mut base: Mat = [
                [spec.a.clone(), spec.b.clone()],
                [Integer::one(), Integer::zero()],
            ];
            let mut acc: Mat = [
                [Integer::one(), Integer::zero()],
                [Integer::zero(), Integer::one()],
            ];
            while e > 0 {
                if e & 1 == 1 {
                    acc = mat_mul(&acc, &base);
                }
                base = mat_mul(&base, &base);
                e >>= 1;
            }
            Ok(&acc[0][0] * &spec.beta + &acc[0][1] * &spec.alpha)
        }
    }
}

fn dtype_preflight<G: GroupOracle>(
    group: &G,
    g0: &G::Elem,
    g1: &G::Elem,
    spec: &DTypeSpec,
    n: u64,
) -> Result<Integer> {
    step_limit(n, DTYPE_STEPS)?;
    check_group_laws(group, &[g0, g1])?;
    spec.backward()
}

/// `phi(n)` of the d-type sequence by literal iteration.
///
/// Left: `phi(0) = g1^alpha g0^d(-1)`, `phi(1) = g1^beta g0^alpha`,
/// `phi(n) = phi(n-1)^a phi(n-2)^b`. Right mirrors every product.
pub fn dtype_seq<G: GroupOracle>(
    group: &G,
    g0: &G::Elem,
    g1: &G::Elem,
    spec: &DTypeSpec,
    side: Side,
    n: u64,
) -> Result<G::Elem> {
    let d_minus = dtype_preflight(group, g0, g1, spec, n)?;
    let pw = |g: &G::Elem, k: &Integer| group.pow(g, k);
    let ordered = |x: G::Elem, y: G::Elem| match side {
        Side::Left => group.op(&x, &y),
        Side::Right => group.op(&y, &x),
    };
    let mut lo = ordered(pw(g1, &spec.alpha), pw(g0, &d_minus));
    if n == 0 {
        return Ok(lo);
    }
    let mut hi = ordered(pw(g1, &spec.beta), pw(g0, &spec.alpha));
    for _ in 1..n {
        let next = ordered(pw(&hi, &spec.a), pw(&lo, &spec.b));
        lo = hi;
        hi = next;
    }
    Ok(hi)
}

/// `g1^d(n) g0^d(n-1)` for commuting generators.
pub fn dtype_closed_form<G: GroupOracle>(
    group: &G,
    g0: &G::Elem,
    g1: &G::Elem,
    spec: &DTypeSpec,
    n: u64,
) -> Result<G::Elem> {
    dtype_preflight(group, g0, g1, spec, n)?;
    if !group.eq(&group.op(g0, g1), &group.op(g1, g0)) {
        return Err(Error::NonCommuting);
    }
    let idx = SeqIndex::new(n as i64)?;
    let dn = d_seq(spec, idx)?;
    let dprev = d_seq(spec, idx.offset(-1)?)?;
    Ok(group.op(&group.pow(g1, &dn), &group.pow(g0, &dprev)))
}

/// Exponent pair `(d(n), d(n-1))` used by the closed form.
pub fn dtype_exponents(spec: &DTypeSpec, n: u64) -> Result<(Integer, Integer)> {
    let idx = SeqIndex::new(n as i64)?;
    Ok((d_seq(spec, idx)?, d_seq(spec, idx.offset(-1)?)?))
}
