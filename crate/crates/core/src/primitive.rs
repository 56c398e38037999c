//! Primitive generators `a_{il}` of the free algebra and their self-pairings `tau_{il}`.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::cartan::{Datum, Label};
use crate::error::{Error, Result};
use crate::freealg::{self, FreeAlgebra, FreeElem, Word};
use crate::lin::Lin;
use crate::linalg;
use crate::scalar::Scalar;

/// Compositions of `n` in lexicographic order.
pub fn compositions(n: i64) -> Vec<Vec<i64>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Partitions of `n` as weakly decreasing sequences.
pub fn partitions(n: i64) -> Vec<Vec<i64>> {
    fn go(n: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            go(n - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn composition_word(i: usize, c: &[i64]) -> Word {
    c.iter().map(|&p| Label::new(i, p as usize)).collect()
}

/// A primitive generator `a_{il} = e_{il} + sum_c gamma_c e_{i,c}`.
#[derive(Clone, Debug)]
pub struct PrimGen {
    pub label: Label,
    pub element: FreeElem,
    pub tau: Scalar,
    /// Coefficients `gamma_c` for the compositions `c` with all parts `< l`.
    pub gammas: Vec<(Vec<i64>, Scalar)>,
    /// True when the orthogonality system was singular and a pivot-supported
    /// solution was chosen (the element is then unique only modulo the radical).
    pub singular_system: bool,
}

/// Cache of primitive generators over a free algebra.
pub struct Primitives {
    fa: Arc<FreeAlgebra>,
    cache: RwLock<HashMap<Label, Arc<PrimGen>>>,
}

impl Primitives {
    pub fn new(fa: Arc<FreeAlgebra>) -> Self {
        Primitives {
            fa,
            cache: RwLock::new(HashMap::new()),
        }
    }

    pub fn free(&self) -> &Arc<FreeAlgebra> {
        &self.fa
    }

    pub fn datum(&self) -> &Datum {
        self.fa.datum()
    }

    pub fn get(&self, lab: Label) -> Result<Arc<PrimGen>> {
        if let Some(p) = self.cache.read().get(&lab) {
            return Ok(p.clone());
        }
        let p = Arc::new(self.compute(lab)?);
        self.cache.write().entry(lab).or_insert(p.clone());
        Ok(p)
    }

    pub fn tau(&self, lab: Label) -> Result<Scalar> {
        Ok(self.get(lab)?.tau.clone())
    }

    fn compute(&self, lab: Label) -> Result<PrimGen> {
        let d = self.datum();
        d.check_label(lab)?;
        let i = lab.i();
        let l = lab.l();
        let top: Word = vec![lab];
        if d.is_real(i) || l == 1 {
            let tau = self.fa.word_form(&top, &top);
            return Ok(PrimGen {
                label: lab,
                element: Lin::basis(top),
                tau,
                gammas: Vec::new(),
                singular_system: false,
            });
        }
        let lower: Vec<Vec<i64>> = compositions(l)
            .into_iter()
            .filter(|c| c.len() > 1)
            .collect();
        let words: Vec<Word> = lower.iter().map(|c| composition_word(i, c)).collect();
        let g: linalg::Matrix = words
            .iter()
            .map(|a| words.iter().map(|b| self.fa.word_form(a, b)).collect())
            .collect();
        let rhs: Vec<Scalar> = words.iter().map(|a| -self.fa.word_form(a, &top)).collect();
        let gamma = linalg::solve_vec(&g, &rhs).ok_or_else(|| {
            Error::Degenerate(format!(
                "orthogonality system for ({}, {l}) is inconsistent in degree {l}*alpha_{}",
                d.name(i),
                d.name(i)
            ))
        })?;
        let singular = linalg::rank(&g) < words.len();
        let mut element = Lin::basis(top.clone());
        for (w, c) in words.iter().zip(&gamma) {
            element.add_term(w.clone(), c.clone());
        }
        let tau = self.fa.form(&element, &Lin::basis(top));
        if tau.is_zero() {
            return Err(Error::Degenerate(format!(
                "tau_({}, {l}) vanishes",
                d.name(i)
            )));
        }
        let gammas = lower
            .into_iter()
            .zip(gamma)
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(PrimGen {
            label: lab,
            element,
            tau,
            gammas,
            singular_system: singular,
        })
    }

    /// `a_{i,c} = a_{ic_1} ... a_{ic_t}` as an element of the free algebra.
    pub fn composition_product(&self, i: usize, c: &[i64]) -> Result<FreeElem> {
        let mut acc = freealg::one();
        for &p in c {
            acc = freealg::multiply(&acc, &self.get(Label::new(i, p as usize))?.element);
        }
        Ok(acc)
    }

    /// `tau_{i,c} = prod_k tau_{ic_k}`.
    pub fn composition_tau(&self, i: usize, c: &[i64]) -> Result<Scalar> {
        let mut acc = Scalar::one();
        for &p in c {
            acc = &acc * &self.tau(Label::new(i, p as usize))?;
        }
        Ok(acc)
    }

    /// Expand a word in primitive letters into the free algebra on `e_{il}`.
    pub fn expand_word(&self, w: &[Label]) -> Result<FreeElem> {
        let mut acc = freealg::one();
        for &lab in w {
            acc = freealg::multiply(&acc, &self.get(lab)?.element);
        }
        Ok(acc)
    }

    pub fn expand(&self, x: &Lin<Word>) -> Result<FreeElem> {
        x.try_map_linear(|w| self.expand_word(w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinatorics() {
        assert_eq!(
            compositions(3),
            vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]
        );
        assert_eq!(
            partitions(4),
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
    }

    #[test]
    fn isotropic_level_two() {
        let d = Arc::new(Datum::from_json(r#"{"indices":[{"name":"i","a_ii":0,"s":1}]}"#).unwrap());
        let p = Primitives::new(Arc::new(FreeAlgebra::new(d)));
        let a2 = p.get(Label::new(0, 2)).unwrap();
        assert_eq!(
            a2.element.coeff(&vec![Label::new(0, 1); 2]),
            Scalar::ratio(-1, 2)
        );
        assert_eq!(a2.element.coeff(&vec![Label::new(0, 2)]), Scalar::one());
        assert_eq!(a2.tau, Scalar::ratio(1, 2));
    }
}
