//! Arithmetic in Q(q): field laws, the bar involution and q-combinatorics,
//! checked against numerical evaluation at rational points.

mod common;

use common::{eval, int, q, rat};
use num_rational::BigRational;
use proptest::prelude::*;
use qbb_core::scalar::{q_binom, q_binom_signed, q_fact, q_int_signed};
use qbb_core::Scalar;

fn laurent() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((-4i64..=4, -3i64..=3), 0..4)
        .prop_map(|terms| Scalar::laurent(&terms))
}

/// Ratios of small Laurent polynomials (denominator nonzero).
fn scalar() -> impl Strategy<Value = Scalar> {
    (laurent(), laurent()).prop_map(|(n, d)| if d.is_zero() { n } else { &n / &d })
}

fn points() -> Vec<BigRational> {
    vec![rat(2, 1), rat(-3, 2), rat(5, 7)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn addition_and_multiplication_are_ring_operations(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn nonzero_scalars_are_invertible(a in scalar()) {
        prop_assume!(!a.is_zero());
        prop_assert!((&a * &a.inv().unwrap()).is_one());
    }

    #[test]
    fn arithmetic_agrees_with_evaluation(a in scalar(), b in scalar()) {
        for x in points() {
            let (Some(va), Some(vb)) = (eval(&a, &x), eval(&b, &x)) else { continue };
            prop_assert_eq!(eval(&(&a + &b), &x), Some(&va + &vb));
            prop_assert_eq!(eval(&(&a * &b), &x), Some(&va * &vb));
        }
    }

    #[test]
    fn bar_is_an_involutive_ring_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        for x in points() {
            if let (Some(v), Some(w)) = (eval(&a.bar(), &x), eval(&a, &x.recip())) {
                prop_assert_eq!(v, w);
            }
        }
    }

    #[test]
    fn display_round_trips_through_parsing(a in scalar()) {
        let parsed: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(parsed, a);
    }

    #[test]
    fn powers_add_exponents(a in scalar(), m in -3i64..=3, n in -3i64..=3) {
        prop_assume!(!a.is_zero());
        prop_assert_eq!(&a.pow(m) * &a.pow(n), a.pow(m + n));
    }
}

#[test]
fn canonical_form_identifies_equal_fractions() {
    let lhs = &(&q(2) - &int(1)) / &(&q(1) - &int(1));
    assert_eq!(lhs, &q(1) + &int(1));
    let half: Scalar = "1/2".parse().unwrap();
    assert_eq!(half, Scalar::ratio(2, 4));
    assert_eq!(&q(3) * &q(-3), Scalar::one());
}

/// `[n]_{q^d}` evaluated directly as `(x^{dn} - x^{-dn}) / (x^d - x^{-d})`.
fn q_int_oracle(n: i64, d: i64, x: &BigRational) -> BigRational {
    let p = |k: i64| {
        let base = if k >= 0 { x.clone() } else { x.recip() };
        (0..k.unsigned_abs()).fold(common::one_rat(), |acc, _| acc * &base)
    };
    (p(d * n) - p(-d * n)) / (p(d) - p(-d))
}

#[test]
fn quantum_integers_match_their_closed_form() {
    for d in 1..=3 {
        for n in -4..=6 {
            for x in points() {
                assert_eq!(
                    eval(&q_int_signed(n, d), &x).unwrap(),
                    q_int_oracle(n, d, &x),
                    "[{n}] with q^{d}"
                );
            }
        }
    }
    assert_eq!(q_int_signed(2, 1), &q(1) + &q(-1));
    assert_eq!(q_int_signed(3, 1), &(&q(2) + &int(1)) + &q(-2));
}

#[test]
fn quantum_binomials_satisfy_pascal_and_symmetry() {
    for d in 1..=2 {
        for n in 1..=7 {
            for k in 0..=n {
                let b = q_binom(n, k, d).unwrap();
                assert_eq!(b, q_binom(n, n - k, d).unwrap());
                assert_eq!(b, b.bar(), "bar invariance of [{n} choose {k}]");
                if k >= 1 && k < n {
                    // [n, k] = q^{dk} [n-1, k] + q^{-d(n-k)} [n-1, k-1]
                    let rhs = &(&q(d * k) * &q_binom(n - 1, k, d).unwrap())
                        + &(&q(-d * (n - k)) * &q_binom(n - 1, k - 1, d).unwrap());
                    assert_eq!(b, rhs, "Pascal for [{n} choose {k}]");
                }
                let via_fact = &q_fact(n, d).unwrap()
                    / &(&q_fact(k, d).unwrap() * &q_fact(n - k, d).unwrap());
                assert_eq!(b, via_fact);
            }
        }
    }
    assert_eq!(q_binom(4, 2, 1).unwrap(), Scalar::laurent(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]));
}

#[test]
fn signed_binomials_vanish_below_zero_and_extend_negatively() {
    assert!(q_binom_signed(3, -1, 1).is_zero());
    assert!(q_binom_signed(2, 3, 1).is_zero());
    // [-1 choose k] = (-1)^k.
    for k in 0..4 {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        assert_eq!(q_binom_signed(-1, k, 1), int(sign));
    }
}

#[test]
fn division_by_zero_is_an_error() {
    assert!(Scalar::zero().inv().is_err());
    assert!("1/0".parse::<Scalar>().is_err());
}
