//! Budgeted integer factorization: trial division, Miller-Rabin, perfect
//! powers and Brent's variant of Pollard rho.
//!
//! The result is allowed to be partial. Composites that survive the budget
//! are returned as-is so callers can decide what they still can.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer as _;
use num_traits::{One, Zero};

/// Work limits for [`factor`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Trial division by every prime up to this bound.
    pub trial_limit: u32,
    /// Total rho iterations allowed per input, across all restarts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            trial_limit: 1_000_000,
            rho_iterations: 6_000_000,
        }
    }
}

impl FactorBudget {
    pub fn with_rho_iterations(rho_iterations: u64) -> Self {
        FactorBudget {
            rho_iterations,
            ..FactorBudget::default()
        }
    }
}

/// `n = prod p^e * prod c` where every `c` is composite and unsplit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Factorization {
    pub primes: Vec<(BigUint, u32)>,
    pub unfactored: Vec<BigUint>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.unfactored.is_empty()
    }

    fn push_prime(&mut self, p: BigUint, e: u32) {
        match self.primes.iter_mut().find(|(q, _)| *q == p) {
            Some((_, k)) => *k += e,
            None => self.primes.push((p, e)),
        }
    }

    fn normalize(&mut self) {
        self.primes.sort();
        self.unfactored.sort();
    }
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(1_000_000))
}

fn sieve(limit: u32) -> Vec<u32> {
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

const MR_BASES: [u32; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller-Rabin with the first 20 prime bases: deterministic below
/// 3.3e24, a strong probable-prime test above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    for &p in &MR_BASES {
        let p = BigUint::from(p);
        if *n == p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap_or(0);
    let d = &n1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// `Some((r, k))` with `k >= 2` maximal and `r^k = n`.
fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    let bits = n.bits() as u32;
    for k in (2..=bits).rev() {
        let r = n.nth_root(k);
        if r > BigUint::one() && r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Brent's cycle-finding rho with batched gcds. Returns a nontrivial
/// factor or `None` once `budget` iterations have been spent.
fn rho(n: &BigUint, budget: &mut u64) -> Option<BigUint> {
    const BATCH: u64 = 128;
    let one = BigUint::one();
    for c in 1u32.. {
        if *budget == 0 {
            return None;
        }
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut g = one.clone();
        let mut r: u64 = 1;
        let mut q = one.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let m = BATCH.min(r - k);
                for _ in 0..m {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                *budget = budget.saturating_sub(m);
                g = q.gcd(n);
                k += m;
                if *budget == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if g == *n {
            // batch overshot; replay one step at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return Some(g);
        }
    }
    None
}

/// Factors `n > 0` as far as the budget allows.
pub fn factor(n: &BigUint, budget: FactorBudget) -> Factorization {
    let mut out = Factorization::default();
    if n.is_zero() || n.is_one() {
        return out;
    }
    let mut rest = n.clone();
    for &p in small_primes().iter().take_while(|&&p| p <= budget.trial_limit) {
        if rest.is_one() {
            break;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push_prime(BigUint::from(p), e);
        }
    }
    if !rest.is_one() {
        let mut rho_budget = budget.rho_iterations;
        split(rest, 1, budget.trial_limit, &mut rho_budget, &mut out);
    }
    out.normalize();
    out
}

fn split(n: BigUint, mult: u32, trial: u32, rho_budget: &mut u64, out: &mut Factorization) {
    if n.is_one() {
        return;
    }
    let trial_sq = BigUint::from(trial) * BigUint::from(trial);
    if n < trial_sq || is_probable_prime(&n) {
        out.push_prime(n, mult);
        return;
    }
    if let Some((r, k)) = perfect_power(&n) {
        split(r, mult * k, trial, rho_budget, out);
        return;
    }
    match rho(&n, rho_budget) {
        Some(d) => {
            let other = &n / &d;
            split(d, mult, trial, rho_budget, out);
            split(other, mult, trial, rho_budget, out);
        }
        None => {
            for _ in 0..mult {
                out.unfactored.push(n.clone());
            }
        }
    }
}

/// Exponent of `p` in `n` (both positive).
pub fn valuation(n: &BigUint, p: &BigUint) -> u32 {
    let mut n = n.clone();
    let mut e = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        e += 1;
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u128) -> BigUint {
        BigUint::from(n)
    }

    fn product(f: &Factorization) -> BigUint {
        let mut acc = BigUint::one();
        for (p, e) in &f.primes {
            acc *= p.pow(*e);
        }
        for c in &f.unfactored {
            acc *= c;
        }
        acc
    }

    #[test]
    fn primality() {
        let primes = [2u128, 3, 5, 1_000_003, 2_305_843_009_213_693_951];
        for p in primes {
            assert!(is_probable_prime(&big(p)), "{p}");
        }
        // Carmichael numbers and a strong pseudoprime to base 2
        for c in [561u128, 41041, 3_215_031_751, 1_000_001] {
            assert!(!is_probable_prime(&big(c)), "{c}");
        }
    }

    #[test]
    fn small_and_medium_numbers() {
        let f = factor(&big(360), FactorBudget::default());
        assert_eq!(f.primes, vec![(big(2), 3), (big(3), 2), (big(5), 1)]);
        // two primes just above the trial bound
        let n = big(1_000_003) * big(1_000_033);
        let f = factor(&n, FactorBudget::default());
        assert!(f.is_complete());
        assert_eq!(f.primes, vec![(big(1_000_003), 1), (big(1_000_033), 1)]);
    }

    #[test]
    fn perfect_powers_of_large_primes() {
        let p = big(1_000_000_007);
        let n = p.pow(3) * big(12);
        let f = factor(&n, FactorBudget::default());
        assert_eq!(f.primes, vec![(big(2), 2), (big(3), 1), (p, 3)]);
    }

    #[test]
    fn fibonacci_with_rho() {
        // f(100) = 3 * 5^2 * 11 * 41 * 101 * 151 * 401 * 3001 * 570601
        let f100 = crate::seqcore::fib_i(100).unwrap().to_biguint().unwrap();
        let f = factor(&f100, FactorBudget::default());
        assert!(f.is_complete());
        assert_eq!(product(&f), f100);
        let f137 = crate::seqcore::fib_i(137).unwrap().to_biguint().unwrap();
        let f = factor(&f137, FactorBudget::default());
        assert_eq!(product(&f), f137);
    }

    #[test]
    fn exhausted_budget_keeps_composites() {
        // product of two 12-digit primes with no rho budget
        let n = big(100_000_000_003) * big(100_000_000_019);
        let f = factor(&n, FactorBudget::with_rho_iterations(0));
        assert!(!f.is_complete());
        assert_eq!(f.unfactored, vec![n.clone()]);
        let f = factor(&n, FactorBudget::default());
        assert!(f.is_complete());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&big(1000), &big(5)), 3);
        assert_eq!(valuation(&big(7), &big(5)), 0);
    }
}
