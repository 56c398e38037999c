//! Dense univariate polynomials over the integers.

use std::fmt;

use super::int::Int;
use super::modp;

/// Coefficient `k` is the coefficient of `q^k`. Trailing zeros are trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<Int>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(Int::ONE)
    }

    pub fn constant(c: Int) -> Self {
        IntPoly::from_coeffs(vec![c])
    }

    /// `c * q^k`
    pub fn monomial(c: Int, k: usize) -> Self {
        let mut v = vec![Int::ZERO; k + 1];
        v[k] = c;
        IntPoly::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Int>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        IntPoly::from_coeffs(cs.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Int] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> &Int {
        self.coeffs.last().unwrap_or(&Int::ZERO)
    }

    pub fn coeff(&self, k: usize) -> &Int {
        self.coeffs.get(k).unwrap_or(&Int::ZERO)
    }

    /// Number of trailing factors of `q`.
    pub fn valuation(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Divide by `q^k`; the caller guarantees `k <= valuation`.
    pub fn shift_down(&self, k: usize) -> Self {
        IntPoly {
            coeffs: self.coeffs[k..].to_vec(),
        }
    }

    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        let mut v = vec![Int::ZERO; k];
        v.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs: v }
    }

    /// `q^deg * p(1/q)`
    pub fn reversed(&self) -> Self {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::from_coeffs(v)
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k).add(o.coeff(k))).collect();
        IntPoly::from_coeffs(v)
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|k| self.coeff(k).sub(o.coeff(k))).collect();
        IntPoly::from_coeffs(v)
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(Int::neg).collect(),
        }
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        if o.coeffs.len() == 1 {
            return self.scale(&o.coeffs[0]);
        }
        if self.coeffs.len() == 1 {
            return o.scale(&self.coeffs[0]);
        }
        let mut v = vec![Int::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = v[i + j].add(&a.mul(b));
                }
            }
        }
        IntPoly::from_coeffs(v)
    }

    pub fn scale(&self, c: &Int) -> IntPoly {
        if c.is_zero() {
            return IntPoly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    pub fn div_exact_int(&self, c: &Int) -> IntPoly {
        if c.is_one() {
            return self.clone();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a.div_exact(c)).collect(),
        }
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> Int {
        let mut g = Int::ZERO;
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = c.neg();
        }
        self.div_exact_int(&c)
    }

    /// Exact division over the integers, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if d.coeffs.len() == 1 {
            let c = &d.coeffs[0];
            if self.coeffs.iter().all(|a| c.divides(a)) {
                return Some(self.div_exact_int(c));
            }
            return None;
        }
        if self.degree() < d.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = d.degree();
        let lc = d.lc();
        let mut quot = vec![Int::ZERO; self.degree() - dl + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dl];
            if top.is_zero() {
                continue;
            }
            let (qk, r) = top.div_rem(lc);
            if !r.is_zero() {
                return None;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] = rem[k + j].sub(&qk.mul(dc));
                }
            }
            quot[k] = qk;
        }
        if rem.iter().all(Int::is_zero) {
            Some(IntPoly::from_coeffs(quot))
        } else {
            None
        }
    }

    /// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let mut r = self.coeffs.clone();
        let db = b.degree();
        let lb = b.lc().clone();
        if self.degree() < db {
            return self.clone();
        }
        let mut steps = self.degree() - db + 1;
        while r.len() > db && !r.is_empty() {
            let top = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            for c in r.iter_mut() {
                *c = c.mul(&lb);
            }
            for (j, bc) in b.coeffs.iter().enumerate() {
                r[shift + j] = r[shift + j].sub(&top.mul(bc));
            }
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
            steps -= 1;
        }
        let mut out = IntPoly::from_coeffs(r);
        if steps > 0 {
            out = out.scale(&lb.pow(steps as u32));
        }
        out
    }

    /// Primitive gcd (positive leading coefficient) via the subresultant PRS.
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return o.primitive_part();
        }
        if o.is_zero() {
            return self.primitive_part();
        }
        if self.is_constant() || o.is_constant() {
            return IntPoly::one();
        }
        let (mut a, mut b) = if self.degree() >= o.degree() {
            (self.primitive_part(), o.primitive_part())
        } else {
            (o.primitive_part(), self.primitive_part())
        };
        if a == b {
            return a;
        }
        if a.div_exact(&b).is_some() {
            return b;
        }
        if !modp::may_share_factor(&a, &b) {
            return IntPoly::one();
        }
        let mut g = Int::ONE;
        let mut h = Int::ONE;
        loop {
            let delta = (a.degree() - b.degree()) as u32;
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            if r.is_constant() {
                return IntPoly::one();
            }
            a = b;
            let denom = g.mul(&h.pow(delta));
            b = r.div_exact_int(&denom);
            g = a.lc().clone();
            h = if delta == 0 {
                h
            } else {
                g.pow(delta).div_exact(&h.pow(delta - 1))
            };
        }
        b.primitive_part()
    }

    pub fn eval_mod(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for c in self.coeffs.iter().rev() {
            acc = modp::add(modp::mul(acc, x), c.mod_u64(modp::P));
        }
        acc
    }

    /// Render as a polynomial in `q` with the given extra exponent shift.
    pub fn render(&self, shift: i64) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let e = k as i64 + shift;
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            if e == 0 {
                out.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    out.push_str(&a.to_string());
                    out.push('*');
                }
                out.push('q');
                if e != 1 {
                    out.push('^');
                    out.push_str(&e.to_string());
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(cs: &[i64]) -> IntPoly {
        IntPoly::from_i64(cs)
    }

    #[test]
    fn gcd_of_products() {
        // (q+1)(q-2) and (q+1)(q^2+3)
        let a = p(&[1, 1]).mul(&p(&[-2, 1]));
        let b = p(&[1, 1]).mul(&p(&[3, 0, 1]));
        assert_eq!(a.gcd(&b), p(&[1, 1]));
        // coprime
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[1, 0, 1])), IntPoly::one());
        // non-monic common factor
        let c = p(&[1, 2]).mul(&p(&[5, 0, 3]));
        let d = p(&[1, 2]).mul(&p(&[-7, 1]));
        assert_eq!(c.gcd(&d), p(&[1, 2]));
    }

    #[test]
    fn exact_division() {
        let a = p(&[-1, 0, 1]);
        assert_eq!(a.div_exact(&p(&[-1, 1])), Some(p(&[1, 1])));
        assert_eq!(a.div_exact(&p(&[2, 1])), None);
    }

    #[test]
    fn pseudo_remainder_matches_definition() {
        let a = p(&[1, 2, 3, 4]);
        let b = p(&[1, 2]);
        // lc(b)^3 * a = Q*b + R
        let r = a.pseudo_rem(&b);
        assert!(r.is_constant());
        let lhs = a.scale(&Int::from(8)).sub(&r);
        assert!(lhs.div_exact(&b).is_some());
    }
}
