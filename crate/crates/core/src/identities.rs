//! Registry of scalar Fibonacci/Lucas identities, range verification with
//! witnesses, and membership tests for the ring `A = {k f(5n)}` and the
//! ideal `M` built from generalized Fibonacci-Lucas numbers.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_integer::Integer as _;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{dec, sign_power, Integer, SeqIndex};
use crate::seqcore::{fib_i, gen_fib_lucas, lucas_i};

/// One checkable identity.
///
/// `P21*` are the fourteen classical Fibonacci/Lucas relations, `P35_2` is
/// `5(f(2n+1) + f(2n+5)) = l(2n) + l(2n+2) + l(2n+4) + l(2n+6)`.
/// `P21IxAsPrinted` keeps the misprinted `l(2n) l(2n+2) - 5 f(n+1)^2 = 1`
/// around so its failure can be demonstrated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityId {
    P21I,
    P21II,
    P21III,
    P21IV,
    P21V,
    P21VI,
    P21VII,
    P21VIII,
    P21IX,
    P21X,
    P21XI,
    P21XII,
    P21XIII,
    P21XIV,
    P35_2,
    P21IxAsPrinted,
}

const TAGS: [(IdentityId, &str); 16] = [
    (IdentityId::P21I, "P21_I"),
    (IdentityId::P21II, "P21_II"),
    (IdentityId::P21III, "P21_III"),
    (IdentityId::P21IV, "P21_IV"),
    (IdentityId::P21V, "P21_V"),
    (IdentityId::P21VI, "P21_VI"),
    (IdentityId::P21VII, "P21_VII"),
    (IdentityId::P21VIII, "P21_VIII"),
    (IdentityId::P21IX, "P21_IX"),
    (IdentityId::P21X, "P21_X"),
    (IdentityId::P21XI, "P21_XI"),
    (IdentityId::P21XII, "P21_XII"),
    (IdentityId::P21XIII, "P21_XIII"),
    (IdentityId::P21XIV, "P21_XIV"),
    (IdentityId::P35_2, "P35_2"),
    (IdentityId::P21IxAsPrinted, "P21_IX_as_printed"),
];

impl IdentityId {
    /// The registered identities that are expected to hold.
    pub const VALID: [IdentityId; 15] = [
        IdentityId::P21I,
        IdentityId::P21II,
        IdentityId::P21III,
        IdentityId::P21IV,
        IdentityId::P21V,
        IdentityId::P21VI,
        IdentityId::P21VII,
        IdentityId::P21VIII,
        IdentityId::P21IX,
        IdentityId::P21X,
        IdentityId::P21XI,
        IdentityId::P21XII,
        IdentityId::P21XIII,
        IdentityId::P21XIV,
        IdentityId::P35_2,
    ];

    pub fn tag(self) -> &'static str {
        TAGS.iter().find(|(id, _)| *id == self).map(|(_, t)| *t).unwrap()
    }

    /// Smallest n at which the identity is defined. Clauses that mention
    /// `f(n-1)` start at 1.
    pub fn domain_min(self) -> i64 {
        match self {
            IdentityId::P21IV
            | IdentityId::P21XI
            | IdentityId::P21XII
            | IdentityId::P21XIII => 1,
            _ => 0,
        }
    }

    /// Largest n whose evaluation stays within the sequence index bound.
    pub fn domain_max(self) -> i64 {
        let b = crate::num::INDEX_BOUND;
        match self {
            IdentityId::P21XIV => b / 4,
            IdentityId::P35_2 => (b - 6) / 2,
            IdentityId::P21II
            | IdentityId::P21X
            | IdentityId::P21XI
            | IdentityId::P21XIII
            | IdentityId::P21VIII => b / 2,
            IdentityId::P21III | IdentityId::P21IX => (b - 2) / 2,
            IdentityId::P21IxAsPrinted => (b - 2) / 2,
            _ => b - 1,
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TAGS.iter()
            .find(|(_, t)| t.eq_ignore_ascii_case(s))
            .map(|(id, _)| *id)
            .ok_or_else(|| Error::UnknownId(s.to_string()))
    }
}

impl Serialize for IdentityId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of checking one identity at one index.
///
/// For equational identities `holds == (lhs == rhs)`. For `P21_I` the two
/// fields carry `f(n) mod 5` and `n mod 5`, and `holds` states that both
/// vanish or neither does.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub holds: bool,
    #[serde(with = "dec")]
    pub lhs: Integer,
    #[serde(with = "dec")]
    pub rhs: Integer,
    pub n: i64,
}

impl CheckResult {
    pub(crate) fn equation(n: i64, lhs: Integer, rhs: Integer) -> Self {
        CheckResult {
            holds: lhs == rhs,
            lhs,
            rhs,
            n,
        }
    }
}

fn f(n: i64) -> Result<Integer> {
    fib_i(n)
}

fn l(n: i64) -> Result<Integer> {
    lucas_i(n)
}

fn sq(x: Integer) -> Integer {
    &x * &x
}

// f(-n) and l(-n) by running the recursion backwards, so clauses v and vi
// are not checked against the sign rule they are meant to confirm.
fn backward(seed0: i64, seed1: i64, n: i64) -> Integer {
    let (mut hi, mut lo) = (Integer::from(seed1), Integer::from(seed0));
    for _ in 0..n {
        let next = &hi - &lo;
        hi = lo;
        lo = next;
    }
    lo
}

/// Evaluates both sides of `id` at `n`.
pub fn check_identity(id: IdentityId, n: i64) -> Result<CheckResult> {
    if n < id.domain_min() {
        return Err(Error::Domain {
            what: id.tag().to_string(),
            n,
            constraint: format!("n >= {}", id.domain_min()),
        });
    }
    if n > id.domain_max() {
        return Err(Error::Domain {
            what: id.tag().to_string(),
            n,
            constraint: format!("n <= {} (index bound)", id.domain_max()),
        });
    }
    use IdentityId::*;
    let r = match id {
        P21I => {
            let five = Integer::from(5);
            let fr = f(n)?.mod_floor(&five);
            let nr = Integer::from(n).mod_floor(&five);
            CheckResult {
                holds: fr.is_zero() == nr.is_zero(),
                lhs: fr,
                rhs: nr,
                n,
            }
        }
        P21II => CheckResult::equation(n, f(2 * n)?, l(n)? * f(n)?),
        P21III => CheckResult::equation(n, sq(f(n)?) + sq(f(n + 1)?), f(2 * n + 1)?),
        P21IV => CheckResult::equation(n, sq(f(n)?) - f(n + 1)? * f(n - 1)?, sign_power(n - 1)),
        P21V => CheckResult::equation(n, backward(0, 1, n), sign_power(n + 1) * f(n)?),
        P21VI => CheckResult::equation(n, backward(2, 1, n), sign_power(n) * l(n)?),
        P21VII => CheckResult::equation(n, sq(l(n)?), 5 * sq(f(n)?) + 4 * sign_power(n)),
        P21VIII => CheckResult::equation(n, l(2 * n)?, sq(l(n)?) + 2 * sign_power(n + 1)),
        P21IX => CheckResult::equation(
            n,
            l(2 * n)? * l(2 * n + 2)?,
            5 * sq(f(2 * n + 1)?) + Integer::one(),
        ),
        P21IxAsPrinted => CheckResult::equation(
            n,
            l(2 * n)? * l(2 * n + 2)?,
            5 * sq(f(n + 1)?) + Integer::one(),
        ),
        P21X => CheckResult::equation(n, f(2 * n)? + sq(f(n)?), 2 * f(n)? * f(n + 1)?),
        P21XI => CheckResult::equation(n, f(2 * n)? - sq(f(n)?), 2 * f(n)? * f(n - 1)?),
        P21XII => CheckResult::equation(n, sq(l(n)?) - sq(f(n)?), 4 * f(n - 1)? * f(n + 1)?),
        P21XIII => CheckResult::equation(n, f(2 * n)?, sq(f(n + 1)?) - sq(f(n - 1)?)),
        P21XIV => CheckResult::equation(n, l(4 * n)?, 5 * sq(f(2 * n)?) + 2),
        P35_2 => CheckResult::equation(
            n,
            5 * (f(2 * n + 1)? + f(2 * n + 5)?),
            l(2 * n)? + l(2 * n + 2)? + l(2 * n + 4)? + l(2 * n + 6)?,
        ),
    };
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub n: i64,
    #[serde(with = "dec")]
    pub lhs: Integer,
    #[serde(with = "dec")]
    pub rhs: Integer,
}

/// Result of [`verify_range`]. `millis` is `None` when timing has been
/// stripped for reproducible output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub identity: IdentityId,
    pub range: [i64; 2],
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub millis: Option<u64>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn without_timing(mut self) -> Self {
        self.millis = None;
        self
    }
}

/// Checks `id` at every n in `[lo, hi]`. Failures are listed in increasing n.
pub fn verify_range(id: IdentityId, lo: i64, hi: i64) -> Result<Report> {
    if lo > hi {
        return Err(Error::EmptyRange { lo, hi });
    }
    // Validate both ends up front so a bad range fails before any work.
    check_identity(id, lo)?;
    check_identity(id, hi)?;
    let start = Instant::now();
    let results: Vec<CheckResult> = (lo..=hi)
        .into_par_iter()
        .map(|n| check_identity(id, n))
        .collect::<Result<_>>()?;
    let failures = results
        .into_iter()
        .filter(|r| !r.holds)
        .map(|r| Failure {
            n: r.n,
            lhs: r.lhs,
            rhs: r.rhs,
        })
        .collect();
    Ok(Report {
        identity: id,
        range: [lo, hi],
        checked: (hi - lo + 1) as u64,
        failures,
        millis: Some(start.elapsed().as_millis() as u64),
    })
}

/// `k` with `f(5n) = k f(5) = 5k`.
pub fn f5_factor(n: u64) -> Result<Integer> {
    let idx = i64::try_from(n)
        .ok()
        .and_then(|n| n.checked_mul(5))
        .ok_or(Error::IndexOutOfBound {
            index: i64::MAX,
            bound: crate::num::INDEX_BOUND,
        })?;
    let v = fib_i(idx)?;
    let (k, r) = v.div_rem(&Integer::from(5));
    debug_assert!(r.is_zero());
    Ok(k)
}

fn multiple_of_five(x: &Integer) -> bool {
    x.is_multiple_of(&Integer::from(5))
}

/// Membership in `A = {k f(5n) : k in Z, n in N}`, which equals `5Z`:
/// every `f(5n)` is a multiple of `f(5) = 5`, and `k f(5)` realizes each
/// multiple of 5.
pub fn in_ring_a(x: &Integer) -> bool {
    multiple_of_five(x)
}

/// One summand of an element of `M`: the generalized Fibonacci-Lucas number
/// with parameters `(p, 5q)` whose Fibonacci component has index `5n`,
/// i.e. `p f(5n) + 5q l(5n+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MTerm {
    #[serde(with = "dec")]
    pub p: Integer,
    #[serde(with = "dec")]
    pub q: Integer,
    pub n: u64,
}

impl MTerm {
    pub fn new(p: impl Into<Integer>, q: impl Into<Integer>, n: u64) -> Self {
        MTerm {
            p: p.into(),
            q: q.into(),
            n,
        }
    }

    fn index(&self, shift: i64) -> Result<SeqIndex> {
        let n = i64::try_from(self.n).unwrap_or(i64::MAX);
        SeqIndex::new(n.saturating_mul(5).saturating_add(shift))
    }

    /// `p f(5n) + 5q l(5n+1)`, i.e. `g^{p,5q}` at index `5n + 1`.
    pub fn value(&self) -> Result<Integer> {
        gen_fib_lucas(&self.p, &(&self.q * 5), self.index(1)?)
    }

    /// `g^{p,5q}` at index `5n` taken literally, `p f(5n-1) + 5q l(5n)`.
    /// Not a multiple of 5 in general (`p = q = n = 1` gives 58).
    pub fn value_as_printed(&self) -> Result<Integer> {
        gen_fib_lucas(&self.p, &(&self.q * 5), self.index(0)?)
    }
}

impl FromStr for MTerm {
    type Err = Error;

    /// Parses `p:q:n`.
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            input: s.to_string(),
            expected: "a term `p:q:n`",
        };
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(err());
        }
        let p = crate::num::parse_integer(parts[0]).map_err(|_| err())?;
        let q = crate::num::parse_integer(parts[1]).map_err(|_| err())?;
        let n = parts[2].trim().parse::<u64>().map_err(|_| err())?;
        Ok(MTerm { p, q, n })
    }
}

/// Sum of the terms' values; always a multiple of 5.
pub fn m_element(terms: &[MTerm]) -> Result<Integer> {
    if terms.is_empty() {
        return Err(Error::EmptyTerms);
    }
    terms
        .iter()
        .try_fold(Integer::zero(), |acc, t| Ok(acc + t.value()?))
}

/// Membership in `M`, which equals `5Z`: terms `(p, 0, 1)` give every
/// `p f(5) = 5p`, and every term is a multiple of 5.
pub fn in_ideal_m(x: &Integer) -> bool {
    multiple_of_five(x)
}
