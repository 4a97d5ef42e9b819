//! Fibonacci, Lucas and generalized Fibonacci-Lucas numbers at any signed
//! index with `|n| <= 10^6`.
//!
//! Everything is built on the fast-doubling kernel [`fib_pair`], which needs
//! `O(log n)` big-integer multiplications. Negative indices are folded back
//! onto the non-negative kernel with `f(-n) = (-1)^(n+1) f(n)` and
//! `l(-n) = (-1)^n l(n)`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::num::{sign_power, Integer, SeqIndex};

/// Returns `(f(n), f(n+1))` for `n >= 0`.
pub fn fib_pair(n: SeqIndex) -> Result<(Integer, Integer)> {
    let n = n.get();
    if n < 0 {
        return Err(Error::NegativeIndex(n));
    }
    Ok(doubling(n as u64))
}

// Walks the bits of n from the top: with (a, b) = (f(k), f(k+1)),
//   f(2k)   = a (2b - a)
//   f(2k+1) = a^2 + b^2
fn doubling(n: u64) -> (Integer, Integer) {
    let mut a = Integer::zero();
    let mut b = Integer::one();
    if n == 0 {
        return (a, b);
    }
    let top = 63 - n.leading_zeros();
    for bit in (0..=top).rev() {
        let two_b_minus_a = (&b << 1u32) - &a;
        let c = &a * &two_b_minus_a;
        let d = &a * &a + &b * &b;
        if (n >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

/// `f(n)` for any admissible signed index.
pub fn fib(n: SeqIndex) -> Integer {
    let k = n.get();
    let (f, _) = doubling(k.unsigned_abs());
    if k < 0 {
        sign_power(k + 1) * f
    } else {
        f
    }
}

/// `l(n)` for any admissible signed index; `l(n) = 2 f(n+1) - f(n)`.
pub fn lucas(n: SeqIndex) -> Integer {
    let k = n.get();
    let (f, g) = doubling(k.unsigned_abs());
    let l = (g << 1u32) - f;
    if k < 0 {
        sign_power(k) * l
    } else {
        l
    }
}

/// Generalized Fibonacci-Lucas number `g(n) = p f(n-1) + q l(n)`, `n >= 0`.
///
/// This reproduces both seeds `g(0) = p + 2q`, `g(1) = q` and the
/// Fibonacci recursion.
pub fn gen_fib_lucas(p: &Integer, q: &Integer, n: SeqIndex) -> Result<Integer> {
    if n.get() < 0 {
        return Err(Error::NegativeIndex(n.get()));
    }
    let prev = fib(n.offset(-1)?);
    Ok(p * prev + q * lucas(n))
}

/// Convenience wrapper for callers holding a raw `i64`.
pub fn fib_i(n: i64) -> Result<Integer> {
    Ok(fib(SeqIndex::new(n)?))
}

/// Convenience wrapper for callers holding a raw `i64`.
pub fn lucas_i(n: i64) -> Result<Integer> {
    Ok(lucas(SeqIndex::new(n)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ix(n: i64) -> SeqIndex {
        SeqIndex::new(n).unwrap()
    }

    fn naive(seed0: i64, seed1: i64, n: usize) -> Vec<Integer> {
        let mut v = vec![Integer::from(seed0), Integer::from(seed1)];
        while v.len() <= n + 1 {
            let k = v.len();
            let next = &v[k - 1] + &v[k - 2];
            v.push(next);
        }
        v
    }

    #[test]
    fn worked_values() {
        assert_eq!(fib(ix(10)), Integer::from(55));
        assert_eq!(fib(ix(0)), Integer::zero());
        assert_eq!(fib(ix(65)), Integer::from(17167680177565u64));
        assert_eq!(fib(ix(-4)), Integer::from(-3));
        assert_eq!(lucas(ix(0)), Integer::from(2));
        assert_eq!(lucas(ix(5)), Integer::from(11));
        assert_eq!(lucas(ix(-3)), Integer::from(-4));
    }

    #[test]
    fn pairs() {
        assert_eq!(fib_pair(ix(0)).unwrap(), (0.into(), 1.into()));
        assert_eq!(fib_pair(ix(9)).unwrap(), (34.into(), 55.into()));
        assert_eq!(fib_pair(ix(19)).unwrap(), (4181.into(), 6765.into()));
        assert_eq!(fib_pair(ix(-1)), Err(Error::NegativeIndex(-1)));
    }

    #[test]
    fn generalized() {
        let one = Integer::one();
        assert_eq!(gen_fib_lucas(&one, &one, ix(1)).unwrap(), one);
        let (p, q) = (Integer::from(2), Integer::from(3));
        assert_eq!(gen_fib_lucas(&p, &q, ix(0)).unwrap(), Integer::from(8));
        assert_eq!(gen_fib_lucas(&p, &q, ix(3)).unwrap(), Integer::from(14));
        assert!(gen_fib_lucas(&p, &q, ix(-1)).is_err());
    }

    #[test]
    fn matches_naive_recursion() {
        let f = naive(0, 1, 300);
        let l = naive(2, 1, 300);
        for n in 0..=300usize {
            assert_eq!(fib(ix(n as i64)), f[n], "f({n})");
            assert_eq!(lucas(ix(n as i64)), l[n], "l({n})");
        }
    }

    #[test]
    fn negative_indices_match_backward_recursion() {
        // f(k-2) = f(k) - f(k-1), run from (f(1), f(0))
        let (mut hi, mut lo) = (Integer::one(), Integer::zero());
        let (mut lhi, mut llo) = (Integer::one(), Integer::from(2));
        for n in 1..=200i64 {
            let next = &hi - &lo;
            hi = lo;
            lo = next;
            let lnext = &lhi - &llo;
            lhi = llo;
            llo = lnext;
            assert_eq!(fib(ix(-n)), lo, "f(-{n})");
            assert_eq!(lucas(ix(-n)), llo, "l(-{n})");
        }
    }

    #[test]
    fn extreme_index_is_fast_enough() {
        let f = fib(ix(1_000_000));
        // f(10^6) has 208988 decimal digits.
        assert_eq!(f.to_string().len(), 208_988);
    }
}
