//! Balanced q-integers, q-factorials and q-binomials at `q_i = q^d`.

use super::Scalar;
use crate::error::{Error, Result};

/// `[n]` at `q^d` for any integer `n`, using `[-n] = -[n]`.
pub fn q_int_signed(n: i64, d: i64) -> Scalar {
    if n < 0 {
        return -q_int_signed(-n, d);
    }
    let terms: Vec<(i64, i64)> = (0..n).map(|k| (d * (n - 1 - 2 * k), 1)).collect();
    Scalar::laurent(&terms)
}

/// `[n]_i = (q_i^n - q_i^-n) / (q_i - q_i^-1)` with `q_i = q^d`.
pub fn q_int(n: i64, d: i64) -> Result<Scalar> {
    if n < 0 {
        return Err(Error::domain(format!("q-integer of negative argument {n}")));
    }
    if d <= 0 {
        return Err(Error::domain(format!(
            "q-integer with non-positive exponent scale {d}"
        )));
    }
    Ok(q_int_signed(n, d))
}

pub fn q_fact(n: i64, d: i64) -> Result<Scalar> {
    if n < 0 {
        return Err(Error::domain(format!(
            "q-factorial of negative argument {n}"
        )));
    }
    Ok((1..=n).map(|k| q_int_signed(k, d)).product())
}

/// Gaussian binomial for `0 <= k`; zero when `k > n >= 0`.
pub fn q_binom(n: i64, k: i64, d: i64) -> Result<Scalar> {
    if n < 0 || k < 0 {
        return Err(Error::domain(format!(
            "q-binomial [{n} choose {k}] outside n,k >= 0"
        )));
    }
    Ok(q_binom_signed(n, k, d))
}

/// Generalized Gaussian binomial `prod_{t=1..k} [n-t+1]/[t]`, valid for any
/// integer top entry; zero for `k < 0`.
pub fn q_binom_signed(n: i64, k: i64, d: i64) -> Scalar {
    if k < 0 {
        return Scalar::zero();
    }
    if n >= 0 && k > n {
        return Scalar::zero();
    }
    let mut num = Scalar::one();
    let mut den = Scalar::one();
    for t in 1..=k {
        num = &num * &q_int_signed(n - t + 1, d);
        den = &den * &q_int_signed(t, d);
    }
    &num / &den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_int_examples() {
        assert_eq!(q_int(2, 1).unwrap(), Scalar::laurent(&[(1, 1), (-1, 1)]));
        assert!(q_int(0, 3).unwrap().is_zero());
        assert!(matches!(q_int(-1, 1), Err(Error::Domain(_))));
    }

    #[test]
    fn q_binom_four_two() {
        let b = q_binom(4, 2, 1).unwrap();
        assert_eq!(
            b,
            Scalar::laurent(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)])
        );
        assert!(b.is_laurent_integral());
    }

    #[test]
    fn q_binom_matches_factorial_quotient() {
        for d in 1..=3 {
            for n in 0..=6 {
                for k in 0..=n {
                    let lhs = q_binom(n, k, d).unwrap();
                    let rhs = &q_fact(n, d).unwrap()
                        / &(&q_fact(k, d).unwrap() * &q_fact(n - k, d).unwrap());
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}
