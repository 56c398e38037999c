//! Shared fixtures and independent oracles for the integration tests.
//!
//! The oracles here deliberately avoid the engine's own algorithms: the form
//! is computed straight from its defining recursion, scalars are evaluated
//! numerically over the rationals, and linear systems are solved by plain
//! Gaussian elimination.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use qbb_core::cartan::{Datum, Label};
use qbb_core::engine::{Engine, EngineConfig};
use qbb_core::Scalar;

pub type Word = Vec<Label>;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn load(name: &str) -> Datum {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    Datum::from_json(&text).unwrap()
}

pub fn engine(name: &str, window: usize) -> Engine {
    Engine::new(
        load(name),
        EngineConfig {
            window,
            no_cache: true,
            ..EngineConfig::default()
        },
    )
}

pub fn q(k: i64) -> Scalar {
    Scalar::q_pow(k)
}

pub fn int(k: i64) -> Scalar {
    Scalar::int(k)
}

/// Value of `s` at the rational point `x`, or `None` at a pole.
pub fn eval(s: &Scalar, x: &BigRational) -> Option<BigRational> {
    let poly = |p: &qbb_core::scalar::IntPoly| {
        let mut acc = BigRational::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc * x + BigRational::from_integer(c.to_bigint());
        }
        acc
    };
    let den = poly(s.denominator());
    if den.is_zero() {
        return None;
    }
    let mut v = poly(s.numerator()) / den;
    let shift = s.shift();
    let base = if shift >= 0 { x.clone() } else { x.recip() };
    for _ in 0..shift.unsigned_abs() {
        v *= &base;
    }
    Some(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The form on words, computed from its characterization: `{1,1} = 1`,
/// `{e_il, e_il} = nu_il`, symmetry, and `{x, yz} = {rho(x), y (x) z}` with
/// `rho(e_il) = sum_{m+n=l} q_(i)^{mn} e_im (x) e_in` multiplied with the
/// twist `q^{(|x_2|, |y_1|)}`.
pub struct FormOracle<'a> {
    d: &'a Datum,
    memo: HashMap<(Word, Word), Scalar>,
}

impl<'a> FormOracle<'a> {
    pub fn new(d: &'a Datum) -> Self {
        FormOracle {
            d,
            memo: HashMap::new(),
        }
    }

    fn degree(&self, w: &[Label]) -> Vec<i64> {
        let mut v = vec![0; self.d.rank()];
        for lab in w {
            v[lab.i()] += lab.l();
        }
        v
    }

    fn pairing(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                acc += x * y * self.d.s(i) * self.d.a(i, j);
            }
        }
        acc
    }

    /// `rho(w)` as a list of `(coefficient, left, right)`.
    fn coproduct(&self, w: &[Label]) -> Vec<(Scalar, Word, Word)> {
        let mut terms = vec![(Scalar::one(), Word::new(), Word::new())];
        for lab in w {
            let (i, l) = (lab.i(), lab.l());
            let mut next = Vec::new();
            for (c, x1, x2) in &terms {
                for m in 0..=l {
                    let n = l - m;
                    let mut y1 = vec![0; self.d.rank()];
                    y1[i] = m;
                    let twist = self.pairing(&self.degree(x2), &y1);
                    let coeff = c * &q(twist + self.d.q_paren(i) * m * n);
                    let mut a = x1.clone();
                    let mut b = x2.clone();
                    if m > 0 {
                        a.push(Label::new(i, m as usize));
                    }
                    if n > 0 {
                        b.push(Label::new(i, n as usize));
                    }
                    next.push((coeff, a, b));
                }
            }
            terms = next;
        }
        terms
    }

    pub fn form(&mut self, w: &[Label], v: &[Label]) -> Scalar {
        if self.degree(w) != self.degree(v) {
            return Scalar::zero();
        }
        if v.is_empty() {
            return Scalar::one();
        }
        let key = (w.to_vec(), v.to_vec());
        if let Some(s) = self.memo.get(&key) {
            return s.clone();
        }
        let out = if v.len() == 1 {
            if w.len() == 1 {
                if w[0] == v[0] {
                    self.d.nu(v[0])
                } else {
                    Scalar::zero()
                }
            } else {
                self.form(v, w)
            }
        } else {
            let (y, z) = v.split_at(1);
            let mut acc = Scalar::zero();
            for (c, x1, x2) in self.coproduct(w) {
                if self.degree(&x1) != self.degree(y) {
                    continue;
                }
                let a = self.form(&x1, y);
                if a.is_zero() {
                    continue;
                }
                let b = self.form(&x2, z);
                acc = &acc + &(&c * &(&a * &b));
            }
            acc
        };
        self.memo.insert(key, out.clone());
        out
    }

    pub fn form_elems(&mut self, x: &[(Word, Scalar)], y: &[(Word, Scalar)]) -> Scalar {
        let mut acc = Scalar::zero();
        for (w, a) in x {
            for (v, b) in y {
                let f = self.form(w, v);
                if !f.is_zero() {
                    acc = &acc + &(&f * &(a * b));
                }
            }
        }
        acc
    }
}

/// Every word of the given degree over the datum's labels, in any order.
pub fn words_of_degree(d: &Datum, degree: &[i64]) -> Vec<Word> {
    fn go(d: &Datum, rest: &mut Vec<i64>, cur: &mut Word, out: &mut Vec<Word>) {
        if rest.iter().all(|&k| k == 0) {
            out.push(cur.clone());
            return;
        }
        for lab in d.labels() {
            let (i, l) = (lab.i(), lab.l());
            if rest[i] >= l {
                rest[i] -= l;
                cur.push(lab);
                go(d, rest, cur, out);
                cur.pop();
                rest[i] += l;
            }
        }
    }
    let mut out = Vec::new();
    go(d, &mut degree.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// One solution of `a x = b` by Gaussian elimination (free variables set to 0).
pub fn solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for k in c..=cols {
            m[r][k] = &m[r][k] * &inv;
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                for t in c..=cols {
                    let v = &m[r][t] * &f;
                    m[k][t] = &m[k][t] - &v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Scalar::zero(); cols];
    for (k, &c) in pivots.iter().enumerate() {
        x[c] = m[k][cols].clone();
    }
    Some(x)
}

/// Compositions of `n` with every part below `cap`.
pub fn compositions_below(n: i64, cap: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..cap.min(n + 1) {
        for mut rest in compositions_below(n - first, cap) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub fn one_rat() -> BigRational {
    BigRational::one()
}

/// Rank by Gaussian elimination.
pub fn rank(a: &[Vec<Scalar>]) -> usize {
    let mut m = a.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for k in r + 1..m.len() {
            if !m[k][c].is_zero() {
                let f = &m[k][c] * &inv;
                for t in c..cols {
                    let v = &m[r][t] * &f;
                    m[k][t] = &m[k][t] - &v;
                }
            }
        }
        r += 1;
    }
    r
}

pub fn comp_word(i: usize, c: &[i64]) -> Word {
    c.iter().map(|&p| Label::new(i, p as usize)).collect()
}

/// `e_il + sum gamma_c e_{i,c}` orthogonal to every `e_{i,c'}` with parts
/// below `l`, solved directly (free variables at 0).
pub fn brute_force_primitive(oracle: &mut FormOracle, i: usize, l: i64) -> Vec<(Word, Scalar)> {
    let lower = compositions_below(l, l);
    let words: Vec<Word> = lower.iter().map(|c| comp_word(i, c)).collect();
    let top = vec![Label::new(i, l as usize)];
    let a: Vec<Vec<Scalar>> = words
        .iter()
        .map(|row| words.iter().map(|col| oracle.form(col, row)).collect())
        .collect();
    let b: Vec<Scalar> = words.iter().map(|row| -oracle.form(&top, row)).collect();
    let gamma = solve(&a, &b).expect("orthogonality system is consistent");
    let mut out = vec![(top, int(1))];
    out.extend(words.into_iter().zip(gamma).filter(|(_, g)| !g.is_zero()));
    out
}
