//! Arithmetic modulo the Mersenne prime 2^61 - 1.
//!
//! Used for cheap coprimality filters and for randomized pivot selection;
//! never as a substitute for an exact answer.

use super::poly::IntPoly;

pub const P: u64 = (1u64 << 61) - 1;

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

#[inline]
pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    let w = (a as u128) * (b as u128);
    let lo = (w as u64) & P;
    let hi = (w >> 61) as u64;
    add(lo, hi)
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, P - 2)
}

pub fn from_i64(v: i64) -> u64 {
    v.rem_euclid(P as i64) as u64
}

fn reduce(p: &IntPoly) -> Vec<u64> {
    let mut v: Vec<u64> = p.coeffs().iter().map(|c| c.mod_u64(P)).collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn rem_in_place(a: &mut Vec<u64>, b: &[u64]) {
    let lb_inv = inv(*b.last().unwrap());
    while a.len() >= b.len() {
        let top = *a.last().unwrap();
        if top != 0 {
            let f = mul(top, lb_inv);
            let off = a.len() - b.len();
            for (j, &bc) in b.iter().enumerate() {
                a[off + j] = sub(a[off + j], mul(f, bc));
            }
        }
        a.pop();
        while a.last() == Some(&0) {
            a.pop();
        }
    }
}

/// `false` only when the two polynomials are certainly coprime over Q.
pub fn may_share_factor(a: &IntPoly, b: &IntPoly) -> bool {
    let mut x = reduce(a);
    let mut y = reduce(b);
    if x.len() != a.coeffs().len() || y.len() != b.coeffs().len() {
        // leading coefficient vanished mod P; no conclusion
        return true;
    }
    while !y.is_empty() {
        rem_in_place(&mut x, &y);
        std::mem::swap(&mut x, &mut y);
    }
    x.len() > 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = 123_456_789_012_345u64;
        assert_eq!(mul(a, inv(a)), 1);
        assert_eq!(add(P - 1, 1), 0);
        assert_eq!(sub(0, 1), P - 1);
        assert_eq!(from_i64(-1), P - 1);
    }

    #[test]
    fn coprimality_filter() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 1]);
        assert!(may_share_factor(&a, &b));
        let c = IntPoly::from_i64(&[1, 0, 1]);
        assert!(!may_share_factor(&a, &c));
    }
}
