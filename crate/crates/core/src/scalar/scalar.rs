use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use super::int::Int;
use super::modp;
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// An element of Q(q) in canonical form `q^shift * num(q) / den(q)`.
///
/// Canonical form: `num(0) != 0`, `den(0) != 0`, `num` and `den` coprime in
/// Q[q], their integer contents coprime, and `lc(den) > 0`. Zero is
/// `num = 0, den = 1, shift = 0`. Structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    shift: i64,
    num: IntPoly,
    den: IntPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            shift: 0,
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Scalar::int(1)
    }

    pub fn int(v: i64) -> Self {
        if v == 0 {
            return Scalar::zero();
        }
        Scalar {
            shift: 0,
            num: IntPoly::constant(Int::from(v)),
            den: IntPoly::one(),
        }
    }

    pub fn from_int(v: Int) -> Self {
        if v.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            shift: 0,
            num: IntPoly::constant(v),
            den: IntPoly::one(),
        }
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Scalar::int(n) / Scalar::int(d)
    }

    /// `q^k`
    pub fn q_pow(k: i64) -> Self {
        Scalar {
            shift: k,
            num: IntPoly::one(),
            den: IntPoly::one(),
        }
    }

    /// Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn laurent(terms: &[(i64, i64)]) -> Self {
        terms.iter().fold(Scalar::zero(), |acc, &(e, c)| {
            acc + Scalar::int(c) * Scalar::q_pow(e)
        })
    }

    /// `num / den` as a polynomial quotient; fails on a zero denominator.
    pub fn normalize(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidScalar("zero denominator".into()));
        }
        Ok(Scalar::canonical(num, den, 0))
    }

    fn canonical(num: IntPoly, den: IntPoly, shift: i64) -> Self {
        if num.is_zero() {
            return Scalar::zero();
        }
        let vn = num.valuation();
        let vd = den.valuation();
        let mut num = num.shift_down(vn);
        let mut den = den.shift_down(vd);
        let shift = shift + vn as i64 - vd as i64;
        if !num.is_constant() && !den.is_constant() {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        Scalar::finish(num, den, shift)
    }

    /// Content and sign normalization; assumes coprime, unit constant terms.
    fn finish(mut num: IntPoly, mut den: IntPoly, shift: i64) -> Self {
        let c = num.content().gcd(&den.content());
        if !c.is_one() {
            num = num.div_exact_int(&c);
            den = den.div_exact_int(&c);
        }
        if den.lc().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Scalar { shift, num, den }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.shift == 0 && self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1, i.e. an element of Z[q, q^-1].
    pub fn is_laurent_integral(&self) -> bool {
        self.den.is_one()
    }

    /// True when the denominator is a constant, i.e. an element of Q[q, q^-1].
    pub fn is_laurent(&self) -> bool {
        self.den.is_constant()
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidScalar("inverse of zero".into()));
        }
        Ok(Scalar::finish(
            self.den.clone(),
            self.num.clone(),
            -self.shift,
        ))
    }

    pub fn pow(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// The field automorphism `q -> q^-1`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Scalar::zero();
        }
        let shift = -self.shift - self.num.degree() as i64 + self.den.degree() as i64;
        Scalar::finish(self.num.reversed(), self.den.reversed(), shift)
    }

    /// Value at `q = x` modulo 2^61-1; `None` when the denominator vanishes.
    pub fn eval_mod(&self, x: u64) -> Option<u64> {
        if self.is_zero() {
            return Some(0);
        }
        let d = self.den.eval_mod(x);
        if d == 0 || x == 0 {
            return None;
        }
        let n = self.num.eval_mod(x);
        let xs = if self.shift >= 0 {
            modp::pow(x, self.shift as u64)
        } else {
            modp::inv(modp::pow(x, (-self.shift) as u64))
        };
        Some(modp::mul(modp::mul(n, xs), modp::inv(d)))
    }

    /// Size measure used for pivot heuristics.
    pub fn weight(&self) -> usize {
        self.num.coeffs().len() + self.den.coeffs().len()
    }

    fn add_impl(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let v = self.shift.min(o.shift);
        let a = self.num.shift_up((self.shift - v) as usize);
        let b = o.num.shift_up((o.shift - v) as usize);
        if self.den == o.den {
            let num = a.add(&b);
            return Scalar::canonical(num, self.den.clone(), v);
        }
        if self.den.is_constant() && o.den.is_constant() {
            let d1 = self.den.lc();
            let d2 = o.den.lc();
            let g = d1.gcd(d2);
            let m1 = d2.div_exact(&g);
            let m2 = d1.div_exact(&g);
            let num = a.scale(&m1).add(&b.scale(&m2));
            let den = IntPoly::constant(d1.mul(&m1));
            return Scalar::canonical(num, den, v);
        }
        let g = self.den.gcd(&o.den);
        let (d1, d2) = if g.is_one() {
            (self.den.clone(), o.den.clone())
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                o.den.div_exact(&g).expect("gcd divides"),
            )
        };
        let num = a.mul(&d2).add(&b.mul(&d1));
        let den = self.den.mul(&d2);
        Scalar::canonical(num, den, v)
    }

    fn mul_impl(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let shift = self.shift + o.shift;
        if self.den.is_constant() && o.den.is_constant() {
            return Scalar::finish(self.num.mul(&o.num), self.den.mul(&o.den), shift);
        }
        let (mut n1, mut d2) = (self.num.clone(), o.den.clone());
        let g1 = n1.gcd(&d2);
        if !g1.is_one() {
            n1 = n1.div_exact(&g1).expect("gcd divides");
            d2 = d2.div_exact(&g1).expect("gcd divides");
        }
        let (mut n2, mut d1) = (o.num.clone(), self.den.clone());
        let g2 = n2.gcd(&d1);
        if !g2.is_one() {
            n2 = n2.div_exact(&g2).expect("gcd divides");
            d1 = d1.div_exact(&g2).expect("gcd divides");
        }
        Scalar::finish(n1.mul(&n2), d1.mul(&d2), shift)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.add_impl(o)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        self.add_impl(&o)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = self.add_impl(o);
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, o: Scalar) {
        *self = self.add_impl(&o);
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.add_impl(&-o)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        self.add_impl(&-o)
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = self.add_impl(&-o);
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.mul_impl(o)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        self.mul_impl(&o)
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = self.mul_impl(o);
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self.mul_impl(&o.inv().expect("division by zero scalar"))
    }
}

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, o: Scalar) -> Scalar {
        &self / &o
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl std::iter::Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let single = self.num.term_count() == 1;
        if self.den.is_one() {
            return write!(f, "{}", self.num.render(self.shift));
        }
        if self.den.is_constant() {
            let d = self.den.lc();
            if single {
                let c = self.num.lc();
                let e = self.shift + self.num.degree() as i64;
                let sign = if c.is_negative() { "-" } else { "" };
                write!(f, "{sign}{}/{d}", c.abs())?;
                return match e {
                    0 => Ok(()),
                    1 => write!(f, "*q"),
                    _ => write!(f, "*q^{e}"),
                };
            }
            return write!(f, "({})/{d}", self.num.render(self.shift));
        }
        let n = self.num.render(self.shift);
        if single {
            write!(f, "{n}/({})", self.den.render(0))
        } else {
            write!(f, "({n})/({})", self.den.render(0))
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    #[test]
    fn normalize_cancels() {
        let s = Scalar::normalize(qp(&[-1, 0, 1]), qp(&[-1, 1])).unwrap();
        assert_eq!(s, Scalar::laurent(&[(1, 1), (0, 1)]));
        assert_eq!(s.to_string(), "q+1");
    }

    #[test]
    fn normalize_zero_numerator() {
        let s = Scalar::normalize(IntPoly::zero(), qp(&[0, 0, 0, 1])).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.to_string(), "0");
    }

    #[test]
    fn normalize_absorbs_constant_denominator() {
        let s = Scalar::normalize(qp(&[0, 2]), qp(&[4])).unwrap();
        assert_eq!(s, Scalar::ratio(1, 2) * Scalar::q_pow(1));
        assert_eq!(s.to_string(), "1/2*q");
    }

    #[test]
    fn normalize_rejects_zero_denominator() {
        assert!(matches!(
            Scalar::normalize(qp(&[1]), IntPoly::zero()),
            Err(Error::InvalidScalar(_))
        ));
    }

    #[test]
    fn bar_examples() {
        let s = Scalar::laurent(&[(2, 1), (-1, 1)]);
        assert_eq!(s.bar(), Scalar::laurent(&[(-2, 1), (1, 1)]));
        assert_eq!(Scalar::int(5).bar(), Scalar::int(5));
        let t = Scalar::laurent(&[(1, 1), (-1, -1)]).inv().unwrap();
        assert_eq!(t.bar(), -&t);
    }

    #[test]
    fn rational_function_arithmetic() {
        let a = Scalar::laurent(&[(1, 1), (0, -1)]).inv().unwrap(); // 1/(q-1)
        let b = Scalar::laurent(&[(1, 1), (0, 1)]).inv().unwrap(); // 1/(q+1)
        let s = &a + &b; // 2q/(q^2-1)
        assert_eq!(s.to_string(), "2*q/(q^2-1)");
        let d = &a - &b; // 2/(q^2-1)
        assert_eq!(d.to_string(), "2/(q^2-1)");
        assert_eq!(&(&s / &d), &Scalar::q_pow(1));
    }

    #[test]
    fn display_forms() {
        assert_eq!(
            (Scalar::ratio(-1, 2) * Scalar::q_pow(3)).to_string(),
            "-1/2*q^3"
        );
        let s = Scalar::laurent(&[(2, 1), (0, 1)]) / Scalar::laurent(&[(1, 1), (0, -1)]);
        assert_eq!(s.to_string(), "(q^2+1)/(q-1)");
        assert_eq!(
            Scalar::laurent(&[(-2, 3), (1, -1)]).to_string(),
            "-q+3*q^-2"
        );
        assert_eq!(
            (Scalar::laurent(&[(1, 1), (0, 1)]) / Scalar::int(3)).to_string(),
            "(q+1)/3"
        );
    }
}
