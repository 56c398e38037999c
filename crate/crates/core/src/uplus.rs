//! `U^+` in coordinates: words in the primitive generators `a_{il}` reduced
//! modulo the radical of the form, the derivations `delta`, the coproduct,
//! the subalgebras `U^+[i]`, `U^+_*[i]` and the projections onto them.
//!
//! Because every `a_{il}` is primitive and orthogonal to all products of
//! lower generators of its own index, the form on words in primitive letters
//! obeys the shuffle recursion
//!
//! ```text
//! {x, a_c z} = tau_c * sum_{t : x_t = c} q^{(|x_1..x_{t-1}|, |c|)} {x without x_t, z},
//! ```
//!
//! so it is block diagonal with respect to the content (the multiset of
//! letters) of a word. Bases and reductions are computed block by block.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::cartan::{Datum, Label, RootVec};
use crate::error::{Error, Result};
use crate::freealg::{concat, word_degree, Word};
use crate::lin::Lin;
use crate::linalg;
use crate::primitive::Primitives;
use crate::scalar::{q_fact, Scalar};

/// Elements of `U^+` (and, through the mirror, `U^-`) in normal form: linear
/// combinations of basis words.
pub type PElem = Lin<Word>;

/// Elements of `U^+ (x) U^+` in normal form on both sides.
pub type PTensor = Lin<(Word, Word)>;

/// Sorted multiset of letters.
pub type Content = Vec<Label>;

/// Largest number of arrangements a content block may have.
pub const MAX_BLOCK: usize = 6000;

/// Default height window for `U^+` computations.
pub const DEFAULT_WINDOW: usize = 8;

pub fn content_of(w: &[Label]) -> Content {
    let mut c = w.to_vec();
    c.sort();
    c
}

/// Distinct arrangements of a sorted multiset, in lexicographic order.
pub fn arrangements(content: &[Label]) -> Vec<Word> {
    fn go(counts: &mut Vec<(Label, usize)>, cur: &mut Word, n: usize, out: &mut Vec<Word>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for k in 0..counts.len() {
            if counts[k].1 == 0 {
                continue;
            }
            counts[k].1 -= 1;
            cur.push(counts[k].0);
            go(counts, cur, n, out);
            cur.pop();
            counts[k].1 += 1;
        }
    }
    let mut counts: Vec<(Label, usize)> = Vec::new();
    for &l in content {
        match counts.last_mut() {
            Some((x, c)) if *x == l => *c += 1,
            _ => counts.push((l, 1)),
        }
    }
    let mut out = Vec::new();
    go(&mut counts, &mut Vec::new(), content.len(), &mut out);
    out
}

/// Number of distinct arrangements (multinomial coefficient).
pub fn arrangement_count(content: &[Label]) -> usize {
    // Build the multinomial one letter at a time: each new letter multiplies
    // by (letters so far) / (copies of it so far), which stays integral.
    let mut total: u128 = 1;
    let mut run = 0u128;
    for (seen, k) in (1u128..).zip(0..content.len()) {
        run = if k > 0 && content[k] == content[k - 1] {
            run + 1
        } else {
            1
        };
        total = total * seen / run;
        if total > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    total as usize
}

/// One content block: all arrangements, the chosen basis words and the
/// inverse of the basis Gram block of the (tau-free) shuffle pairing.
#[derive(Debug)]
pub struct Block {
    pub content: Content,
    pub words: Vec<Word>,
    pub basis: Vec<Word>,
    inv: linalg::Matrix,
}

impl Block {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `delta_{i,l}`, `delta_{ni}`, `ker delta_i`, `P'_i`.
    Lower,
    /// `delta^{i,l}`, `delta^{ni}`, `ker delta^i`, `P_i`.
    Upper,
}

pub struct UPlus {
    prims: Arc<Primitives>,
    datum: Arc<Datum>,
    window: usize,
    pair_memo: RwLock<HashMap<(Word, Word), Scalar>>,
    blocks: RwLock<HashMap<Content, Arc<Block>>>,
    reduce_memo: RwLock<HashMap<Word, Arc<PElem>>>,
    kernels: RwLock<HashMap<(Content, usize, Side), Arc<Vec<PElem>>>>,
}

impl UPlus {
    pub fn new(prims: Arc<Primitives>) -> Self {
        let datum = prims.free().datum_arc().clone();
        UPlus {
            prims,
            datum,
            window: DEFAULT_WINDOW,
            pair_memo: RwLock::new(HashMap::new()),
            blocks: RwLock::new(HashMap::new()),
            reduce_memo: RwLock::new(HashMap::new()),
            kernels: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_window(mut self, w: usize) -> Self {
        self.window = w;
        self
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn prims(&self) -> &Arc<Primitives> {
        &self.prims
    }

    pub fn tau(&self, lab: Label) -> Result<Scalar> {
        self.prims.tau(lab)
    }

    pub fn tau_content(&self, c: &[Label]) -> Result<Scalar> {
        let mut acc = Scalar::one();
        for &l in c {
            acc = &acc * &self.tau(l)?;
        }
        Ok(acc)
    }

    pub fn degree(&self, w: &[Label]) -> RootVec {
        word_degree(&self.datum, w)
    }

    fn check_window(&self, w: &[Label]) -> Result<()> {
        let h: i64 = w.iter().map(|l| l.l()).sum();
        if h as usize > self.window {
            return Err(Error::budget(
                "height window of U^+ term",
                h as usize,
                self.window,
            ));
        }
        Ok(())
    }

    /// The tau-free shuffle pairing of two words.
    pub fn shuffle_pairing(&self, x: &[Label], y: &[Label]) -> Scalar {
        if x.len() != y.len() {
            return Scalar::zero();
        }
        if x.is_empty() {
            return Scalar::one();
        }
        let key = (x.to_vec(), y.to_vec());
        if let Some(v) = self.pair_memo.read().get(&key) {
            return v.clone();
        }
        let d = &*self.datum;
        let c = y[0];
        let rest = &y[1..];
        let mut acc = Scalar::zero();
        let mut prefix = 0i64;
        for t in 0..x.len() {
            if x[t] == c {
                let mut sub = Vec::with_capacity(x.len() - 1);
                sub.extend_from_slice(&x[..t]);
                sub.extend_from_slice(&x[t + 1..]);
                let v = self.shuffle_pairing(&sub, rest);
                if !v.is_zero() {
                    acc = &acc + &(&v * &Scalar::q_pow(prefix));
                }
            }
            prefix += x[t].l() * c.l() * d.pair_simple(x[t].i(), c.i());
        }
        self.pair_memo.write().insert(key, acc.clone());
        acc
    }

    /// The form `{x, y}` on words.
    pub fn word_form(&self, x: &[Label], y: &[Label]) -> Result<Scalar> {
        if content_of(x) != content_of(y) {
            return Ok(Scalar::zero());
        }
        let p = self.shuffle_pairing(x, y);
        if p.is_zero() {
            return Ok(p);
        }
        Ok(&p * &self.tau_content(x)?)
    }

    pub fn form(&self, x: &PElem, y: &PElem) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (a, ca) in x {
            for (b, cb) in y {
                let v = self.word_form(a, b)?;
                if !v.is_zero() {
                    acc = &acc + &(&(ca * cb) * &v);
                }
            }
        }
        Ok(acc)
    }

    pub fn block(&self, content: &[Label]) -> Result<Arc<Block>> {
        if let Some(b) = self.blocks.read().get(content) {
            return Ok(b.clone());
        }
        self.check_window(content)?;
        for &l in content {
            self.datum.check_label(l)?;
        }
        let n = arrangement_count(content);
        if n > MAX_BLOCK {
            return Err(Error::budget(
                "arrangements in one content block",
                n,
                MAX_BLOCK,
            ));
        }
        let words = arrangements(content);
        let gram: linalg::Matrix = words
            .iter()
            .map(|a| words.iter().map(|b| self.shuffle_pairing(a, b)).collect())
            .collect();
        let rows = linalg::greedy_rows(&gram);
        let basis: Vec<Word> = rows.iter().map(|&k| words[k].clone()).collect();
        let gpp: linalg::Matrix = rows
            .iter()
            .map(|&a| rows.iter().map(|&b| gram[a][b].clone()).collect())
            .collect();
        let inv = if gpp.is_empty() {
            Vec::new()
        } else {
            linalg::inverse(&gpp)?
        };
        let block = Arc::new(Block {
            content: content.to_vec(),
            words,
            basis,
            inv,
        });
        self.blocks
            .write()
            .entry(content.to_vec())
            .or_insert(block.clone());
        Ok(block)
    }

    /// Normal form of a single word.
    pub fn reduce_word(&self, w: &[Label]) -> Result<Arc<PElem>> {
        if let Some(r) = self.reduce_memo.read().get(w) {
            return Ok(r.clone());
        }
        let block = self.block(&content_of(w))?;
        let out = if block.basis.iter().any(|b| b.as_slice() == w) {
            Lin::basis(w.to_vec())
        } else {
            let rhs: Vec<Scalar> = block
                .basis
                .iter()
                .map(|b| self.shuffle_pairing(b, w))
                .collect();
            let coords = linalg::mat_vec(&block.inv, &rhs);
            Lin::from_terms(block.basis.iter().cloned().zip(coords))
        };
        let out = Arc::new(out);
        self.reduce_memo.write().insert(w.to_vec(), out.clone());
        Ok(out)
    }

    pub fn reduce(&self, x: &Lin<Word>) -> Result<PElem> {
        x.try_map_linear(|w| self.reduce_word(w).map(|r| (*r).clone()))
    }

    pub fn one(&self) -> PElem {
        Lin::basis(Vec::new())
    }

    pub fn gen(&self, lab: Label) -> Result<PElem> {
        self.datum.check_label(lab)?;
        Ok(Lin::basis(vec![lab]))
    }

    pub fn word(&self, w: &[Label]) -> Result<PElem> {
        Ok((*self.reduce_word(w)?).clone())
    }

    pub fn mul(&self, x: &PElem, y: &PElem) -> Result<PElem> {
        let mut raw: Lin<Word> = Lin::zero();
        for (a, ca) in x {
            for (b, cb) in y {
                raw.add_term(concat(a, b), ca * cb);
            }
        }
        self.reduce(&raw)
    }

    pub fn mul_all(&self, xs: &[&PElem]) -> Result<PElem> {
        let mut acc = self.one();
        for x in xs {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// `a_i^{(n)}` for a real index.
    pub fn divided_power(&self, i: usize, n: i64) -> Result<PElem> {
        self.datum.require_real(i)?;
        if n < 0 {
            return Ok(Lin::zero());
        }
        let f = q_fact(n, self.datum.qi(i))?;
        let w = vec![Label::new(i, 1); n as usize];
        Ok(self.word(&w)?.scale(&f.inv()?))
    }

    /// `delta_{i,l}` (lower) or `delta^{i,l}` (upper) on a word.
    pub fn delta_word(&self, lab: Label, side: Side, w: &[Label]) -> Result<PElem> {
        let d = &*self.datum;
        let mut raw: Lin<Word> = Lin::zero();
        let total: i64 = w
            .iter()
            .map(|x| x.l() * d.pair_simple(x.i(), lab.i()))
            .sum();
        let mut before = 0i64;
        for t in 0..w.len() {
            let here = w[t].l() * d.pair_simple(w[t].i(), lab.i());
            if w[t] == lab {
                let exp = match side {
                    Side::Upper => lab.l() * before,
                    Side::Lower => lab.l() * (total - before - here),
                };
                let mut sub = w[..t].to_vec();
                sub.extend_from_slice(&w[t + 1..]);
                raw.add_term(sub, Scalar::q_pow(exp));
            }
            before += here;
        }
        self.reduce(&raw)
    }

    pub fn delta(&self, lab: Label, side: Side, x: &PElem) -> Result<PElem> {
        x.try_map_linear(|w| self.delta_word(lab, side, w))
    }

    /// `rho` of a word in primitive letters: the sum over subsets of letters
    /// sent to the left factor, twisted by every right letter passed.
    pub fn rho_word_raw(
        &self,
        w: &[Label],
        mut keep: impl FnMut(&Word, &Word) -> bool,
    ) -> Lin<(Word, Word)> {
        let d = &*self.datum;
        let n = w.len();
        assert!(n < 31, "word too long for subset expansion");
        let mut out = Lin::zero();
        for mask in 0u32..(1u32 << n) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            let mut exp = 0i64;
            for t in 0..n {
                if mask & (1 << t) != 0 {
                    for &r in &right {
                        let r: Label = r;
                        exp += r.l() * w[t].l() * d.pair_simple(r.i(), w[t].i());
                    }
                    left.push(w[t]);
                } else {
                    right.push(w[t]);
                }
            }
            if keep(&left, &right) {
                out.add_term((left, right), Scalar::q_pow(exp));
            }
        }
        out
    }

    pub fn reduce_tensor(&self, t: &Lin<(Word, Word)>) -> Result<PTensor> {
        let mut out = Lin::zero();
        for ((a, b), c) in t {
            let ra = self.reduce_word(a)?;
            let rb = self.reduce_word(b)?;
            for (x, cx) in ra.iter() {
                for (y, cy) in rb.iter() {
                    out.add_term((x.clone(), y.clone()), &(c * cx) * cy);
                }
            }
        }
        Ok(out)
    }

    pub fn rho(&self, x: &PElem) -> Result<PTensor> {
        let mut raw = Lin::zero();
        for (w, c) in x {
            raw.add_scaled(&self.rho_word_raw(w, |_, _| true), c);
        }
        self.reduce_tensor(&raw)
    }

    /// `{x1 (x) x2, y1 (x) y2} = {x1,y1}{x2,y2}`.
    pub fn tensor_form(&self, u: &PTensor, v: &PTensor) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for ((a1, a2), cu) in u {
            for ((b1, b2), cv) in v {
                let f1 = self.word_form(a1, b1)?;
                if f1.is_zero() {
                    continue;
                }
                let f2 = self.word_form(a2, b2)?;
                if !f2.is_zero() {
                    acc = &acc + &(&(cu * cv) * &(&f1 * &f2));
                }
            }
        }
        Ok(acc)
    }

    /// `delta_{ni}` (lower: `rho(x) = ... + delta_{ni}(x) (x) a_i^{(n)} + ...`)
    /// or `delta^{ni}` (upper: `... + a_i^{(n)} (x) delta^{ni}(x) + ...`).
    pub fn delta_n(&self, i: usize, n: i64, side: Side, x: &PElem) -> Result<PElem> {
        self.datum.require_real(i)?;
        if n <= 0 {
            return Err(Error::domain("delta_n needs n >= 1"));
        }
        let target = vec![Label::new(i, 1); n as usize];
        let fact = q_fact(n, self.datum.qi(i))?;
        let mut raw: Lin<Word> = Lin::zero();
        for (w, c) in x {
            let t = self.rho_word_raw(w, |l, r| match side {
                Side::Lower => *r == target,
                Side::Upper => *l == target,
            });
            for ((l, r), v) in t {
                let keep = if side == Side::Lower { l } else { r };
                raw.add_term(keep, &(c * &v) * &fact);
            }
        }
        self.reduce(&raw)
    }

    /// `delta^{ri;(j,l);si}`: the right factor attached to
    /// `a_i^{(r)} a_{jl} a_i^{(s)}` in `rho(x)`, for `r + s <= l beta`.
    pub fn delta_mixed(&self, i: usize, jl: Label, r: i64, s: i64, x: &PElem) -> Result<PElem> {
        let d = &*self.datum;
        d.require_real(i)?;
        d.check_label(jl)?;
        if jl.i() == i {
            return Err(Error::domain("(j,l) must differ from i"));
        }
        let lb = -d.a(i, jl.i()) * jl.l();
        if r < 0 || s < 0 || r + s > lb {
            return Err(Error::domain(format!(
                "mixed delta needs 0 <= r + s <= l*beta = {lb} (got r = {r}, s = {s})"
            )));
        }
        let ai = Label::new(i, 1);
        let mut content = vec![ai; (r + s) as usize];
        content.push(jl);
        let content = content_of(&content);
        let block = self.block(&content)?;
        if block.rank() != (r + s + 1) as usize {
            return Err(Error::Degenerate(format!(
                "the family a_i^(r) a_jl a_i^(s) is not independent in degree {:?}",
                self.degree(&content)
            )));
        }
        let mut target = vec![ai; r as usize];
        target.push(jl);
        target.extend(std::iter::repeat_n(ai, s as usize));
        let qi = d.qi(i);
        let f = &q_fact(r, qi)? * &q_fact(s, qi)?;
        let mut raw: Lin<Word> = Lin::zero();
        for (w, c) in x {
            for ((_, right), v) in self.rho_word_raw(w, |l, _| *l == target) {
                raw.add_term(right, &(c * &v) * &f);
            }
        }
        self.reduce(&raw)
    }

    /// All contents of a degree (multisets of labels with the given degree).
    pub fn contents_of_degree(&self, beta: &RootVec) -> Vec<Content> {
        let d = &*self.datum;
        let mut per_index: Vec<Vec<Vec<Label>>> = Vec::new();
        for i in 0..d.rank() {
            let n = beta.0[i];
            let parts = if n <= 0 {
                vec![Vec::new()]
            } else if d.is_real(i) {
                vec![vec![Label::new(i, 1); n as usize]]
            } else {
                crate::primitive::partitions(n)
                    .into_iter()
                    .filter(|p| p.iter().all(|&x| x <= d.max_l(i) as i64))
                    .map(|p| {
                        let mut v: Vec<Label> =
                            p.iter().map(|&x| Label::new(i, x as usize)).collect();
                        v.sort();
                        v
                    })
                    .collect()
            };
            per_index.push(parts);
        }
        let mut out: Vec<Content> = vec![Vec::new()];
        for parts in per_index {
            let mut next = Vec::new();
            for base in &out {
                for p in &parts {
                    let mut c = base.clone();
                    c.extend_from_slice(p);
                    next.push(c);
                }
            }
            out = next;
        }
        for c in out.iter_mut() {
            c.sort();
        }
        out.sort();
        out
    }

    /// Basis words of `U^+_beta` across all content blocks.
    pub fn basis_of_degree(&self, beta: &RootVec) -> Result<Vec<Word>> {
        if !beta.is_nonneg() {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for c in self.contents_of_degree(beta) {
            out.extend(self.block(&c)?.basis.iter().cloned());
        }
        Ok(out)
    }

    pub fn dim(&self, beta: &RootVec) -> Result<usize> {
        Ok(self.basis_of_degree(beta)?.len())
    }

    /// Coordinates of a normal-form element along the listed basis words.
    pub fn coords(&self, x: &PElem, basis: &[Word]) -> Vec<Scalar> {
        basis.iter().map(|w| x.coeff(w)).collect()
    }

    /// Basis of `ker delta^i` (upper) or `ker delta_i` (lower) within a content block.
    pub fn kernel_in_block(
        &self,
        i: usize,
        side: Side,
        content: &[Label],
    ) -> Result<Arc<Vec<PElem>>> {
        let key = (content.to_vec(), i, side);
        if let Some(k) = self.kernels.read().get(&key) {
            return Ok(k.clone());
        }
        let block = self.block(content)?;
        let ai = Label::new(i, 1);
        let out: Vec<PElem> = if !content.contains(&ai) {
            block.basis.iter().map(|w| Lin::basis(w.clone())).collect()
        } else {
            let mut smaller = content.to_vec();
            let pos = smaller.iter().position(|&l| l == ai).unwrap();
            smaller.remove(pos);
            let target = self.block(&smaller)?;
            let images: Vec<PElem> = block
                .basis
                .iter()
                .map(|w| self.delta_word(ai, side, w))
                .collect::<Result<_>>()?;
            let m: linalg::Matrix = target
                .basis
                .iter()
                .map(|t| images.iter().map(|im| im.coeff(t)).collect())
                .collect();
            let ker = if target.basis.is_empty() {
                linalg::identity(block.basis.len())
            } else {
                linalg::kernel(&m, block.basis.len())
            };
            ker.into_iter()
                .map(|v| Lin::from_terms(block.basis.iter().cloned().zip(v)))
                .collect()
        };
        let out = Arc::new(out);
        self.kernels.write().insert(key, out.clone());
        Ok(out)
    }

    /// Basis of `U^+[i]_beta` (upper side) or `U^+_*[i]_beta` (lower side).
    pub fn kernel_basis(&self, i: usize, side: Side, beta: &RootVec) -> Result<Vec<PElem>> {
        self.datum.require_real(i)?;
        let mut out = Vec::new();
        if !beta.is_nonneg() {
            return Ok(out);
        }
        for c in self.contents_of_degree(beta) {
            out.extend(self.kernel_in_block(i, side, &c)?.iter().cloned());
        }
        Ok(out)
    }

    pub fn in_kernel(&self, i: usize, side: Side, x: &PElem) -> Result<bool> {
        Ok(self.delta(Label::new(i, 1), side, x)?.is_zero())
    }

    /// Split `x = k + a_i y` (upper side, `k` in `U^+[i]`) or `x = k + y a_i`
    /// (lower side, `k` in `U^+_*[i]`) and return `(k, y)`.
    pub fn decompose(&self, i: usize, side: Side, x: &PElem) -> Result<(PElem, PElem)> {
        self.datum.require_real(i)?;
        let ai = Label::new(i, 1);
        let mut by_content: HashMap<Content, PElem> = HashMap::new();
        for (w, c) in x {
            by_content
                .entry(content_of(w))
                .or_default()
                .add_term(w.clone(), c.clone());
        }
        let mut contents: Vec<Content> = by_content.keys().cloned().collect();
        contents.sort();
        let mut k_total = Lin::zero();
        let mut y_total = Lin::zero();
        for content in contents {
            let part = &by_content[&content];
            let block = self.block(&content)?;
            let kern = self.kernel_in_block(i, side, &content)?;
            let mut cols: Vec<PElem> = kern.iter().cloned().collect();
            let mut smaller_basis = Vec::new();
            if let Some(pos) = content.iter().position(|&l| l == ai) {
                let mut smaller = content.clone();
                smaller.remove(pos);
                let sb = self.block(&smaller)?;
                for w in &sb.basis {
                    let prod = match side {
                        Side::Upper => concat(&[ai], w),
                        Side::Lower => concat(w, &[ai]),
                    };
                    cols.push(self.word(&prod)?);
                    smaller_basis.push(w.clone());
                }
            }
            if cols.len() != block.rank() {
                return Err(Error::Internal(format!(
                    "decomposition along a_i has {} spanning vectors for a block of rank {}",
                    cols.len(),
                    block.rank()
                )));
            }
            let m: linalg::Matrix = block
                .basis
                .iter()
                .map(|b| cols.iter().map(|c| c.coeff(b)).collect())
                .collect();
            let rhs: Vec<Scalar> = block.basis.iter().map(|b| part.coeff(b)).collect();
            let sol = linalg::solve_vec(&m, &rhs)
                .ok_or_else(|| Error::Internal("decomposition along a_i is not spanning".into()))?;
            if linalg::rank(&m) != cols.len() {
                return Err(Error::Internal(
                    "decomposition along a_i is not direct".into(),
                ));
            }
            let nk = kern.len();
            for (v, c) in kern.iter().zip(&sol[..nk]) {
                k_total.add_scaled(v, c);
            }
            for (w, c) in smaller_basis.iter().zip(&sol[nk..]) {
                y_total.add_term(w.clone(), c.clone());
            }
        }
        Ok((k_total, y_total))
    }

    /// `P_i` (upper side) or `P'_i` (lower side).
    pub fn project(&self, i: usize, side: Side, x: &PElem) -> Result<PElem> {
        Ok(self.decompose(i, side, x)?.0)
    }

    /// `f(i,(j,l),m)` (`primed = false`) or `f'(i,(j,l),m)`.
    pub fn f_elem(&self, i: usize, jl: Label, m: i64, primed: bool) -> Result<PElem> {
        let d = &*self.datum;
        d.require_real(i)?;
        if m < 0 {
            return Ok(Lin::zero());
        }
        let middle = self.gen(jl)?;
        let mut out = Lin::zero();
        for k in 0..=m {
            let c = Scalar::int(if k % 2 == 0 { 1 } else { -1 })
                * Scalar::q_pow(d.qi(i) * k * (jl.l() * d.a(i, jl.i()) + m - 1));
            let (left, right) = if primed { (m - k, k) } else { (k, m - k) };
            let t = self.mul_all(&[
                &self.divided_power(i, left)?,
                &middle,
                &self.divided_power(i, right)?,
            ])?;
            out.add_scaled(&t, &c);
        }
        Ok(out)
    }

    /// Reverse every word (the anti-automorphism `*` restricted to `U^+`).
    pub fn star(&self, x: &PElem) -> Result<PElem> {
        let mut raw: Lin<Word> = Lin::zero();
        for (w, c) in x {
            let mut r = w.clone();
            r.reverse();
            raw.add_term(r, c.clone());
        }
        self.reduce(&raw)
    }

    /// Homogeneous degree of a nonzero element.
    pub fn elem_degree(&self, x: &PElem) -> Option<RootVec> {
        x.keys().next().map(|w| self.degree(w))
    }
}

/// Render with letter `a` (or `b` for the negative mirror).
pub fn render(d: &Datum, x: &PElem, letter: &str) -> String {
    crate::freealg::render(d, x, letter)
}
