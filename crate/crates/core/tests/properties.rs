use fibalg::genseq::{binet_general, dtype_exponents, relation_seq, DTypeSpec, LinearRelation, QuadExt, Side};
use fibalg::identities::{check_identity, f5_factor, IdentityId};
use fibalg::quatalg::{fib_quaternion, AlgebraParams, Quaternion};
use fibalg::seqcore::{fib, fib_i, fib_pair, gen_fib_lucas, lucas, lucas_i};
use fibalg::splitcert::{decide_split_hilbert, search_point, verify_point, ConicSpec, FactorBudget, Verdict};
use fibalg::{Integer, Rational, SeqIndex};
use proptest::prelude::*;

fn ix(n: i64) -> SeqIndex {
    SeqIndex::new(n).unwrap()
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn sign(n: i64) -> Integer {
    if n.rem_euclid(2) == 0 {
        1.into()
    } else {
        (-1).into()
    }
}

// Product of basis elements e_i e_j as (scalar factor, basis index), written
// out by hand from e1^2 = alpha, e2^2 = beta, e1 e2 = -e2 e1 = e3.
fn basis_product(i: usize, j: usize, al: &Rational, be: &Rational) -> (Rational, usize) {
    let one = rat(1);
    let ab = al * be;
    match (i, j) {
        (0, k) | (k, 0) => (one, k),
        (1, 1) => (al.clone(), 0),
        (2, 2) => (be.clone(), 0),
        (3, 3) => (-ab, 0),
        (1, 2) => (one, 3),
        (2, 1) => (-one, 3),
        (1, 3) => (al.clone(), 2),
        (3, 1) => (-al.clone(), 2),
        (2, 3) => (-be.clone(), 1),
        (3, 2) => (be.clone(), 1),
        _ => unreachable!(),
    }
}

fn table_mul(x: &[Rational; 4], y: &[Rational; 4], al: &Rational, be: &Rational) -> [Rational; 4] {
    let mut out = [rat(0), rat(0), rat(0), rat(0)];
    for i in 0..4 {
        for j in 0..4 {
            let (c, k) = basis_product(i, j, al, be);
            out[k] += c * &x[i] * &y[j];
        }
    }
    out
}

fn params(al: i64, be: i64) -> AlgebraParams {
    AlgebraParams::new(rat(al), rat(be)).unwrap()
}

fn quat(c: [i64; 4], p: &AlgebraParams) -> Quaternion {
    Quaternion::from_i64(c, p)
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-40i64..=-1, 1i64..=40]
}

fn coeffs() -> impl Strategy<Value = [i64; 4]> {
    prop::array::uniform4(-20i64..=20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fib_and_lucas_recurrence(n in -2000i64..2000) {
        prop_assert_eq!(fib_i(n + 2).unwrap(), fib_i(n + 1).unwrap() + fib_i(n).unwrap());
        prop_assert_eq!(lucas_i(n + 2).unwrap(), lucas_i(n + 1).unwrap() + lucas_i(n).unwrap());
    }

    #[test]
    fn negative_index_signs(n in 0i64..3000) {
        prop_assert_eq!(fib_i(-n).unwrap(), sign(n + 1) * fib_i(n).unwrap());
        prop_assert_eq!(lucas_i(-n).unwrap(), sign(n) * lucas_i(n).unwrap());
    }

    #[test]
    fn pair_matches_singles(n in 0i64..5000) {
        let (a, b) = fib_pair(ix(n)).unwrap();
        prop_assert_eq!(a, fib(ix(n)));
        prop_assert_eq!(b, fib(ix(n + 1)));
    }

    #[test]
    fn generalized_recursion(p in -50i64..50, q in -50i64..50, n in 0i64..500) {
        let (p, q) = (Integer::from(p), Integer::from(q));
        let g = |k| gen_fib_lucas(&p, &q, ix(k)).unwrap();
        prop_assert_eq!(g(n + 2), g(n + 1) + g(n));
    }

    #[test]
    fn binet_in_q_sqrt5(n in 0u64..=200) {
        let rel = LinearRelation::from_i64(1, 1);
        let delta = rat(5);
        let f = binet_general(&rel, &rat(0), &rat(1), n).unwrap();
        prop_assert!(f.value_eq(&QuadExt::rational(Rational::from_integer(fib(ix(n as i64))), &delta)));
        let l = binet_general(&rel, &rat(2), &rat(1), n).unwrap();
        prop_assert!(l.value_eq(&QuadExt::rational(Rational::from_integer(lucas(ix(n as i64))), &delta)));
    }

    #[test]
    fn quaternion_product_matches_table(al in nonzero(), be in nonzero(), x in coeffs(), y in coeffs()) {
        let p = params(al, be);
        let (qx, qy) = (quat(x, &p), quat(y, &p));
        let got = qx.mul(&qy).unwrap();
        let want = table_mul(qx.coeffs(), qy.coeffs(), p.alpha(), p.beta());
        prop_assert_eq!(got.coeffs(), &want);
    }

    #[test]
    fn norm_is_multiplicative(al in nonzero(), be in nonzero(), x in coeffs(), y in coeffs()) {
        let p = params(al, be);
        let (qx, qy) = (quat(x, &p), quat(y, &p));
        prop_assert_eq!(qx.mul(&qy).unwrap().norm(), qx.norm() * qy.norm());
        let xc = qx.mul(&qx.conj()).unwrap();
        prop_assert_eq!(xc.coeffs(), &[qx.norm(), rat(0), rat(0), rat(0)]);
    }

    #[test]
    fn ring_axioms(al in nonzero(), be in nonzero(), x in coeffs(), y in coeffs(), z in coeffs()) {
        let p = params(al, be);
        let (qx, qy, qz) = (quat(x, &p), quat(y, &p), quat(z, &p));
        let xy_z = qx.mul(&qy).unwrap().mul(&qz).unwrap();
        let x_yz = qx.mul(&qy.mul(&qz).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        let left = qx.mul(&qy.add(&qz).unwrap()).unwrap();
        let right = qx.mul(&qy).unwrap().add(&qx.mul(&qz).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn fib_quaternion_norm_is_conj_product(n in 0i64..300) {
        let q = fib_quaternion(ix(n), &AlgebraParams::hamilton()).unwrap();
        prop_assert!(q.norm_is_conj_product());
    }

    #[test]
    fn identities_hold(k in 0usize..IdentityId::VALID.len(), n in -300i64..300) {
        let id = IdentityId::VALID[k];
        let n = n.clamp(id.domain_min(), id.domain_max());
        let r = check_identity(id, n).unwrap();
        prop_assert!(r.holds, "{} at {}: {} vs {}", id, n, r.lhs, r.rhs);
    }

    #[test]
    fn f5_factor_scaled(n in 0u64..=100) {
        prop_assert_eq!(f5_factor(n).unwrap() * Integer::from(5), fib(ix(5 * n as i64)));
    }

    #[test]
    fn fibonacci_dtype_exponents(n in 1u64..400) {
        let (d, dm) = dtype_exponents(&DTypeSpec::fibonacci(), n).unwrap();
        prop_assert_eq!(d, fib(ix(n as i64)));
        prop_assert_eq!(dm, fib(ix(n as i64 - 1)));
    }

    #[test]
    fn sides_agree_for_equal_coefficients(a in -6i64..6, s0 in -9i64..9, s1 in -9i64..9, n in 0u64..60) {
        let rel = LinearRelation::from_i64(a, a);
        let l = relation_seq(&rel, &rat(s0), &rat(s1), Side::Left, n).unwrap();
        let r = relation_seq(&rel, &rat(s0), &rat(s1), Side::Right, n).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn unit_parameter_always_splits(b in nonzero()) {
        let spec = ConicSpec::from_i64(1, b).unwrap();
        prop_assert_eq!(decide_split_hilbert(&spec, FactorBudget::default()).unwrap(), Verdict::Split);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    // A found point is sound, and it forces the local symbols to agree.
    #[test]
    fn search_agrees_with_hilbert(a in nonzero(), b in nonzero()) {
        let spec = ConicSpec::from_i64(a, b).unwrap();
        let verdict = decide_split_hilbert(&spec, FactorBudget::default()).unwrap();
        if let Some(pt) = search_point(&spec, 200).unwrap() {
            prop_assert!(verify_point(&spec, &pt, false));
            prop_assert_eq!(verdict, Verdict::Split);
        }
    }
}
