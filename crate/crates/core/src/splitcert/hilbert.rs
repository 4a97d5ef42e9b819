//! Local Hilbert symbols `(a, b)_v` over Q and the split/division verdict
//! they imply.
//!
//! Symbols are evaluated on the integer representatives `A = num(a) den(a)`
//! and `B = num(b) den(b)`, which lie in the same square classes as `a` and
//! `b`. Every odd prime of `A B` needs a factorization; when the budget runs
//! out the leftover composites are kept as blocks. A block `C` that meets
//! only one of `A`, `B` still has a computable product of symbols (a Jacobi
//! symbol), which is enough to prove division when it equals -1.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::factor::{factor, is_probable_prime, FactorBudget};
use super::ConicSpec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Split,
    Division,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Split => "split",
            Verdict::Division => "division",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Place {
    Infinity,
    Prime(BigUint),
    /// The product of the symbols at all primes of an unfactored composite.
    Block(BigUint),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => f.write_str("inf"),
            Place::Prime(p) => write!(f, "{p}"),
            Place::Block(c) => write!(f, "block:{c}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalSymbol {
    pub place: Place,
    pub value: i8,
}

/// Verdict together with the symbols it rests on. For `Division` the list
/// may be partial; it always contains a -1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertReport {
    pub verdict: Verdict,
    pub symbols: Vec<LocalSymbol>,
}

/// Jacobi symbol `(a / n)` for odd `n > 0`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> i8 {
    assert!(n.bit(0), "jacobi needs an odd modulus");
    let low3 = |x: &BigUint| (x.iter_u32_digits().next().unwrap_or(0) & 7) as u8;
    let mut n = n.clone();
    let mut a = a
        .mod_floor(&BigInt::from_biguint(Sign::Plus, n.clone()))
        .to_biguint()
        .expect("non-negative residue");
    let mut t = 1i8;
    while !a.is_zero() {
        let z = a.trailing_zeros().unwrap_or(0);
        a >>= z;
        if z % 2 == 1 && matches!(low3(&n), 3 | 5) {
            t = -t;
        }
        if low3(&a) & 3 == 3 && low3(&n) & 3 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut n);
        a %= &n;
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn split_off(x: &BigInt, p: &BigUint) -> (u32, BigInt) {
    let pb = BigInt::from_biguint(Sign::Plus, p.clone());
    let mut u = x.clone();
    let mut e = 0;
    while (&u % &pb).is_zero() {
        u /= &pb;
        e += 1;
    }
    (e, u)
}

fn mod8(x: &BigInt) -> u8 {
    x.mod_floor(&BigInt::from(8)).to_u8().expect("residue")
}

fn symbol_at_two(a: &BigInt, b: &BigInt) -> i8 {
    let two = BigUint::from(2u32);
    let (al, u) = split_off(a, &two);
    let (be, v) = split_off(b, &two);
    let eps = |x: u8| u32::from(x % 4 == 3);
    let omega = |x: u8| u32::from(x == 3 || x == 5);
    let (u, v) = (mod8(&u), mod8(&v));
    let e = eps(u) * eps(v) + al * omega(v) + be * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn symbol_at_odd(a: &BigInt, b: &BigInt, p: &BigUint) -> i8 {
    let (al, u) = split_off(a, p);
    let (be, v) = split_off(b, p);
    let mut s = 1i8;
    if al % 2 == 1 && be % 2 == 1 && p.bit(1) {
        s = -s;
    }
    if be % 2 == 1 {
        s *= jacobi(&u, p);
    }
    if al % 2 == 1 {
        s *= jacobi(&v, p);
    }
    s
}

/// `(a, b)_inf`.
fn symbol_at_infinity(a: &BigInt, b: &BigInt) -> i8 {
    if a.is_negative() && b.is_negative() {
        -1
    } else {
        1
    }
}

/// The part of `x` supported on the primes of `c`.
fn smooth_part(x: &BigUint, c: &BigUint) -> BigUint {
    let mut rest = x.clone();
    let mut part = BigUint::one();
    loop {
        let g = rest.gcd(c);
        if g.is_one() {
            return part;
        }
        rest /= &g;
        part *= g;
    }
}

/// Splits the composites against the known primes and against each other
/// until they form a pairwise coprime set of composites.
fn refine(primes: &mut BTreeSet<BigUint>, composites: Vec<BigUint>, budget: FactorBudget) -> Vec<BigUint> {
    let mut work = composites;
    let mut done: Vec<BigUint> = Vec::new();
    while let Some(mut c) = work.pop() {
        for p in primes.iter() {
            while (&c % p).is_zero() {
                c /= p;
            }
        }
        if c.is_one() || done.contains(&c) {
            continue;
        }
        if is_probable_prime(&c) {
            primes.insert(c);
            continue;
        }
        if let Some(i) = done.iter().position(|d| !d.gcd(&c).is_one()) {
            let d = done.swap_remove(i);
            let g = d.gcd(&c);
            for piece in [&d / &g, &c / &g, g] {
                let f = factor(&piece, budget);
                primes.extend(f.primes.into_iter().map(|(p, _)| p));
                work.extend(f.unfactored);
            }
            continue;
        }
        done.push(c);
    }
    done.sort();
    done
}

/// Decides whether the quaternion algebra of `spec` splits by computing
/// every local Hilbert symbol. Returns [`Error::Undecided`] when the budget
/// leaves a composite whose symbols cannot be resolved and no -1 has been
/// found elsewhere.
pub fn hilbert_report(spec: &ConicSpec, budget: FactorBudget) -> Result<HilbertReport> {
    let a = spec.a().numer() * spec.a().denom();
    let b = spec.b().numer() * spec.b().denom();
    let mut primes: BTreeSet<BigUint> = BTreeSet::new();
    primes.insert(BigUint::from(2u32));
    let mut composites = Vec::new();
    let parts = [
        spec.a().numer(),
        spec.a().denom(),
        spec.b().numer(),
        spec.b().denom(),
    ];
    for x in parts {
        let f = factor(x.magnitude(), budget);
        primes.extend(f.primes.into_iter().map(|(p, _)| p));
        composites.extend(f.unfactored);
    }
    let blocks = refine(&mut primes, composites, budget);

    let mut symbols = vec![LocalSymbol {
        place: Place::Infinity,
        value: symbol_at_infinity(&a, &b),
    }];
    for p in &primes {
        let value = if *p == BigUint::from(2u32) {
            symbol_at_two(&a, &b)
        } else {
            symbol_at_odd(&a, &b, p)
        };
        symbols.push(LocalSymbol {
            place: Place::Prime(p.clone()),
            value,
        });
    }

    let mut unresolved = Vec::new();
    for c in blocks {
        let a_part = smooth_part(a.magnitude(), &c);
        let b_part = smooth_part(b.magnitude(), &c);
        let value = match (a_part.is_one(), b_part.is_one()) {
            (false, true) => Some(jacobi(&b, &a_part)),
            (true, false) => Some(jacobi(&a, &b_part)),
            _ => None,
        };
        match value {
            Some(-1) => symbols.push(LocalSymbol {
                place: Place::Block(c),
                value: -1,
            }),
            _ => unresolved.push(c),
        }
    }

    if symbols.iter().any(|s| s.value == -1) {
        return Ok(HilbertReport {
            verdict: Verdict::Division,
            symbols,
        });
    }
    if !unresolved.is_empty() {
        let list: Vec<String> = unresolved.iter().map(|c| c.to_string()).collect();
        return Err(Error::Undecided(list.join(", ")));
    }
    Ok(HilbertReport {
        verdict: Verdict::Split,
        symbols,
    })
}

pub fn decide_split_hilbert(spec: &ConicSpec, budget: FactorBudget) -> Result<Verdict> {
    hilbert_report(spec, budget).map(|r| r.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, Rational};

    fn spec(a: i64, b: i64) -> ConicSpec {
        ConicSpec::new(rat(a), rat(b)).unwrap()
    }

    fn decide(a: i64, b: i64) -> Verdict {
        decide_split_hilbert(&spec(a, b), FactorBudget::default()).unwrap()
    }

    /// Brute-force Legendre symbol by Euler's criterion.
    fn euler(a: i64, p: u64) -> i8 {
        let r = BigInt::from(a).mod_floor(&BigInt::from(p));
        if r.is_zero() {
            return 0;
        }
        let e = r.modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
        if e.is_one() {
            1
        } else {
            -1
        }
    }

    #[test]
    fn jacobi_matches_euler_on_primes() {
        for p in [3u64, 5, 7, 11, 13, 101, 1009] {
            for a in -60i64..60 {
                assert_eq!(jacobi(&BigInt::from(a), &BigUint::from(p)), euler(a, p), "{a}/{p}");
            }
        }
        // composite modulus: (2/15) = (2/3)(2/5) = 1
        assert_eq!(jacobi(&BigInt::from(2), &BigUint::from(15u32)), 1);
        assert_eq!(jacobi(&BigInt::from(5), &BigUint::from(15u32)), 0);
    }

    #[test]
    fn classical_algebras() {
        assert_eq!(decide(-1, -1), Verdict::Division);
        assert_eq!(decide(5, -1), Verdict::Split);
        assert_eq!(decide(1, 7), Verdict::Split);
        assert_eq!(decide(-1, 3), Verdict::Division); // ramified at 2, 3
        assert_eq!(decide(2, 5), Verdict::Division); // 2 is not a square mod 5
        assert_eq!(decide(-1, 2), Verdict::Split);
        assert_eq!(decide(3, -3), Verdict::Split);
    }

    #[test]
    fn product_formula_holds() {
        for a in -30i64..=30 {
            for b in -30i64..=30 {
                if a == 0 || b == 0 {
                    continue;
                }
                let r = hilbert_report(&spec(a, b), FactorBudget::default()).unwrap();
                let prod: i32 = r.symbols.iter().map(|s| i32::from(s.value)).product();
                assert_eq!(prod, 1, "({a},{b})");
            }
        }
    }

    #[test]
    fn rational_entries_use_square_classes() {
        let s = ConicSpec::new(Rational::new(5.into(), 4.into()), Rational::new((-9).into(), 7.into())).unwrap();
        let t = spec(5, -63);
        assert_eq!(
            decide_split_hilbert(&s, FactorBudget::default()).unwrap(),
            decide_split_hilbert(&t, FactorBudget::default()).unwrap()
        );
    }

    #[test]
    fn composite_blocks() {
        // c = p q with p = 3 mod 4 and q = 1 mod 4, so (-1 / c) = -1
        let c: i64 = 1_000_003 * 1_000_033;
        let s = ConicSpec::new(rat(c), rat(-1)).unwrap();
        let r = hilbert_report(&s, FactorBudget::with_rho_iterations(0)).unwrap();
        assert_eq!(r.verdict, Verdict::Division);
        assert!(r.symbols.iter().any(|s| matches!(s.place, Place::Block(_)) && s.value == -1));
        let full = hilbert_report(&s, FactorBudget::default()).unwrap();
        assert_eq!(full.verdict, Verdict::Division);
        assert!(!full.symbols.iter().any(|s| matches!(s.place, Place::Block(_))));

        // both factors = 1 mod 4: the block symbol is +1 and says nothing
        let c: i64 = 1_000_033 * 1_000_037;
        let s = ConicSpec::new(rat(c), rat(-1)).unwrap();
        match hilbert_report(&s, FactorBudget::with_rho_iterations(0)) {
            Err(Error::Undecided(what)) => assert_eq!(what, c.to_string()),
            other => panic!("expected undecided, got {other:?}"),
        }
        assert_eq!(
            decide_split_hilbert(&s, FactorBudget::default()).unwrap(),
            Verdict::Split
        );
    }

    #[test]
    fn gcd_refinement_splits_shared_composites() {
        // a = p q, b = q r with p, q, r above the trial bound and no rho
        let (p, q, r) = (1_000_003i64, 1_000_033i64, 1_000_037i64);
        let s = ConicSpec::new(rat(p * q), rat(q * r)).unwrap();
        let budget = FactorBudget::with_rho_iterations(0);
        let lean = decide_split_hilbert(&s, budget).unwrap();
        let full = decide_split_hilbert(&s, FactorBudget::default()).unwrap();
        assert_eq!(lean, full);
    }
}
