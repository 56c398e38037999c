//! Expansion of rational functions as Laurent series in `q^-1`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Scalar;
use crate::error::{Error, Result};

/// Truncated series `sum_k c_k q^-k` with every stored `k < order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentSeries {
    coeffs: BTreeMap<i64, BigRational>,
    order: i64,
}

impl LaurentSeries {
    /// Coefficient of `q^-k`.
    pub fn coeff(&self, k: i64) -> BigRational {
        self.coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// Nonzero `(k, c)` pairs for `c q^-k`, increasing in `k`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in &self.coeffs {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let e = -k;
            if e == 0 {
                write!(f, "{a}")?;
            } else {
                if !a.is_one() {
                    write!(f, "{a}*")?;
                }
                if e == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{e}")?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", -self.order)
    }
}

fn big(i: &super::Int) -> BigRational {
    BigRational::from_integer(i.to_bigint())
}

/// Expand `s` in powers of `q^-1`, exact for all exponents of `q^-1` below `order`.
pub fn expand_series(s: &Scalar, order: i64) -> Result<LaurentSeries> {
    if order < 0 {
        return Err(Error::Series(format!("negative truncation order {order}")));
    }
    let mut coeffs = BTreeMap::new();
    if s.is_zero() {
        return Ok(LaurentSeries { coeffs, order });
    }
    // s = q^shift N(q)/D(q) = x^v N*(x)/D*(x) with x = q^-1 and reversed polys.
    let n = s.numerator().reversed();
    let d = s.denominator().reversed();
    let d0 = big(d.coeff(0));
    if d0.is_zero() {
        return Err(Error::Series(
            "denominator has no expansion at q = infinity".into(),
        ));
    }
    let v = s.denominator().degree() as i64 - s.numerator().degree() as i64 - s.shift();
    let count = order - v;
    if count <= 0 {
        return Ok(LaurentSeries { coeffs, order });
    }
    let count = count as usize;
    let dn: Vec<BigRational> = d.coeffs().iter().map(big).collect();
    let mut out: Vec<BigRational> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = if k < n.coeffs().len() {
            big(&n.coeffs()[k])
        } else {
            BigRational::zero()
        };
        for j in 1..dn.len().min(k + 1) {
            if !dn[j].is_zero() {
                acc -= &dn[j] * &out[k - j];
            }
        }
        out.push(acc / &d0);
    }
    for (k, c) in out.into_iter().enumerate() {
        if !c.is_zero() {
            coeffs.insert(v + k as i64, c);
        }
    }
    Ok(LaurentSeries { coeffs, order })
}

/// Check membership of `s` in `1 + q^-1 Z_{>=0}[[q^-1]]` up to `order`.
/// Returns human-readable reasons for every suspicious coefficient.
pub fn check_series_cone(s: &Scalar, order: i64) -> Result<Vec<String>> {
    let series = expand_series(s, order)?;
    let mut issues = Vec::new();
    if !series.coeff(0).is_one() {
        issues.push(format!("constant term is {} (expected 1)", series.coeff(0)));
    }
    for (k, c) in series.terms() {
        if k < 0 {
            issues.push(format!("positive power q^{} present", -k));
        } else if k > 0 && (!c.is_integer() || c.is_negative()) {
            issues.push(format!(
                "coefficient of q^-{k} is {c}, not a non-negative integer"
            ));
        }
    }
    Ok(issues)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geometric_series() {
        let s = Scalar::laurent(&[(0, 1), (-2, -1)]).inv().unwrap();
        let e = expand_series(&s, 5).unwrap();
        let ks: Vec<i64> = e.terms().map(|(k, _)| k).collect();
        assert_eq!(ks, vec![0, 2, 4]);
        assert!(e.terms().all(|(_, c)| c.is_one()));
    }

    #[test]
    fn trivial_series() {
        let one = expand_series(&Scalar::one(), 3).unwrap();
        assert_eq!(one.terms().count(), 1);
        let m = expand_series(&Scalar::q_pow(-1), 3).unwrap();
        assert_eq!(m.terms().map(|(k, _)| k).collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn cone_membership() {
        assert!(check_series_cone(&Scalar::one(), 20).unwrap().is_empty());
        let s = Scalar::laurent(&[(0, 1), (-1, 2)]);
        assert!(check_series_cone(&s, 20).unwrap().is_empty());
        assert!(!check_series_cone(&Scalar::int(2), 20).unwrap().is_empty());
        assert!(!check_series_cone(&Scalar::q_pow(1), 20).unwrap().is_empty());
    }
}
