//! The free algebra on the generators `e_{il}`, its twisted tensor square,
//! the coproduct `rho`, and the bilinear form `{ , }` with memoized pairings.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use parking_lot::RwLock;
use serde::{Deserialize, Serialize};

use crate::cartan::{Datum, Label, RootVec};
use crate::error::{Error, Result};
use crate::lin::Lin;
use crate::linalg;
use crate::scalar::{q_fact, Scalar};

/// A monomial: a sequence of generator labels.
pub type Word = Vec<Label>;

pub type FreeElem = Lin<Word>;

pub type TensorElem = Lin<(Word, Word)>;

/// Environment variable that overrides the on-disk Gram cache directory.
pub const CACHE_ENV: &str = "QBB_CACHE_DIR";

/// Default bound on the height of degrees for which Gram tables are built.
pub const DEFAULT_HEIGHT_BUDGET: usize = 8;

pub fn word_degree(d: &Datum, w: &[Label]) -> RootVec {
    let mut v = RootVec::zero(d.rank());
    for lab in w {
        v.0[lab.i()] += lab.l();
    }
    v
}

pub fn concat(a: &[Label], b: &[Label]) -> Word {
    let mut w = Vec::with_capacity(a.len() + b.len());
    w.extend_from_slice(a);
    w.extend_from_slice(b);
    w
}

pub fn multiply(x: &FreeElem, y: &FreeElem) -> FreeElem {
    let mut out = Lin::zero();
    for (a, ca) in x {
        for (b, cb) in y {
            out.add_term(concat(a, b), ca * cb);
        }
    }
    out
}

pub fn generator(lab: Label) -> FreeElem {
    Lin::basis(vec![lab])
}

pub fn one() -> FreeElem {
    Lin::basis(Vec::new())
}

/// All degrees present among the terms of `x`.
pub fn degrees(d: &Datum, x: &FreeElem) -> Vec<RootVec> {
    let mut out: Vec<RootVec> = x.keys().map(|w| word_degree(d, w)).collect();
    out.sort();
    out.dedup();
    out
}

pub fn homogeneous_degree(d: &Datum, x: &FreeElem) -> Result<Option<RootVec>> {
    let ds = degrees(d, x);
    match ds.len() {
        0 => Ok(None),
        1 => Ok(ds.into_iter().next()),
        _ => Err(Error::domain("element is not homogeneous")),
    }
}

/// `(x1 (x) x2)(y1 (x) y2) = q^{(|x2|,|y1|)} x1 y1 (x) x2 y2`.
pub fn tensor_multiply(d: &Datum, u: &TensorElem, v: &TensorElem) -> TensorElem {
    let mut out = Lin::zero();
    for ((x1, x2), cu) in u {
        let dx2 = word_degree(d, x2);
        for ((y1, y2), cv) in v {
            let e = d.root_pairing(&dx2, &word_degree(d, y1));
            out.add_term(
                (concat(x1, y1), concat(x2, y2)),
                &(cu * cv) * &Scalar::q_pow(e),
            );
        }
    }
    out
}

/// `rho(e_{il}) = sum_{m+n=l} q_(i)^{mn} e_{im} (x) e_{in}` with `e_{i0} = 1`.
pub fn coproduct_generator(d: &Datum, lab: Label) -> TensorElem {
    let l = lab.l();
    let qp = d.q_paren(lab.i());
    let piece = |k: i64| {
        if k == 0 {
            Vec::new()
        } else {
            vec![Label::new(lab.i(), k as usize)]
        }
    };
    Lin::from_terms((0..=l).map(|m| ((piece(m), piece(l - m)), Scalar::q_pow(qp * m * (l - m)))))
}

pub fn coproduct_word(d: &Datum, w: &[Label]) -> TensorElem {
    let mut acc: TensorElem = Lin::basis((Vec::new(), Vec::new()));
    for &lab in w {
        acc = tensor_multiply(d, &acc, &coproduct_generator(d, lab));
    }
    acc
}

pub fn coproduct(d: &Datum, x: &FreeElem) -> TensorElem {
    x.map_linear(|w| coproduct_word(d, w))
}

/// `e_i^{(r)} = e_i^r / [r]_i!` for a real index.
pub fn divided_power(d: &Datum, i: usize, r: usize) -> FreeElem {
    let f = q_fact(r as i64, d.qi(i)).expect("nonnegative");
    Lin::single(
        vec![Label::new(i, 1); r],
        f.inv().expect("nonzero factorial"),
    )
}

/// Lexicographically ordered list of all words of degree `beta` whose letters
/// respect the per-index caps on `l`.
pub fn words_of_degree(d: &Datum, beta: &RootVec) -> Vec<Word> {
    fn go(d: &Datum, rem: &mut RootVec, cur: &mut Word, out: &mut Vec<Word>) {
        if rem.is_zero() {
            out.push(cur.clone());
            return;
        }
        for i in 0..d.rank() {
            let avail = rem.0[i];
            if avail <= 0 {
                continue;
            }
            let cap = (d.max_l(i) as i64).min(avail);
            for l in 1..=cap {
                rem.0[i] -= l;
                cur.push(Label::new(i, l as usize));
                go(d, rem, cur, out);
                cur.pop();
                rem.0[i] += l;
            }
        }
    }
    let mut out = Vec::new();
    if beta.is_nonneg() {
        go(d, &mut beta.clone(), &mut Vec::new(), &mut out);
    }
    out
}

/// Complete Gram matrix of one degree on the lexicographic monomial basis.
#[derive(Clone, Debug)]
pub struct GramTable {
    pub degree: RootVec,
    pub basis: Vec<Word>,
    pub matrix: linalg::Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GramFile {
    degree: Vec<i64>,
    basis: Vec<Vec<(u16, u16)>>,
    matrix: Vec<Vec<String>>,
}

/// The free algebra together with the form determined by a datum.
pub struct FreeAlgebra {
    datum: Arc<Datum>,
    height_budget: usize,
    cache_dir: Option<PathBuf>,
    memo: RwLock<HashMap<(Word, Word), Scalar>>,
    grams: RwLock<HashMap<RootVec, Arc<GramTable>>>,
}

impl FreeAlgebra {
    pub fn new(datum: Arc<Datum>) -> Self {
        FreeAlgebra {
            datum,
            height_budget: DEFAULT_HEIGHT_BUDGET,
            cache_dir: None,
            memo: RwLock::new(HashMap::new()),
            grams: RwLock::new(HashMap::new()),
        }
    }

    pub fn with_height_budget(mut self, h: usize) -> Self {
        self.height_budget = h;
        self
    }

    /// Enable the on-disk Gram cache; `None` falls back to the environment variable.
    pub fn with_cache_dir(mut self, dir: Option<PathBuf>) -> Self {
        self.cache_dir = dir.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        self
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn datum_arc(&self) -> &Arc<Datum> {
        &self.datum
    }

    pub fn height_budget(&self) -> usize {
        self.height_budget
    }

    /// Split off a leading `e_{jk}`: returns `D` with `{x, e_{jk} z} = {D, z}`.
    ///
    /// Expanding `rho(x)` letter by letter, each letter `e_{jl}` of `x` sends a
    /// piece `e_{jm}` left and `e_{j,l-m}` right; the left pieces must pair
    /// with `e_{jk}`, which happens exactly when their sizes add up to `k`.
    fn split_leading(&self, x: &[Label], j: usize, k: i64) -> Vec<(Word, Scalar)> {
        let d = &*self.datum;
        let qp = d.q_paren(j);
        let mut out: HashMap<Word, Scalar> = HashMap::new();
        #[allow(clippy::too_many_arguments)]
        fn go(
            fa: &FreeAlgebra,
            x: &[Label],
            pos: usize,
            taken: i64,
            right: &mut Word,
            right_deg: &mut RootVec,
            exp: i64,
            nus: &mut Vec<Label>,
            j: usize,
            k: i64,
            qp: i64,
            out: &mut HashMap<Word, Scalar>,
        ) {
            let d = &*fa.datum;
            if pos == x.len() {
                if taken == k {
                    let mut c = Scalar::q_pow(exp);
                    for &lab in nus.iter() {
                        c = &c * &d.nu(lab);
                    }
                    let e = out.entry(right.clone()).or_insert_with(Scalar::zero);
                    *e = &*e + &c;
                }
                return;
            }
            let lab = x[pos];
            if lab.i() != j {
                right.push(lab);
                right_deg.0[lab.i()] += lab.l();
                go(
                    fa,
                    x,
                    pos + 1,
                    taken,
                    right,
                    right_deg,
                    exp,
                    nus,
                    j,
                    k,
                    qp,
                    out,
                );
                right_deg.0[lab.i()] -= lab.l();
                right.pop();
                return;
            }
            let l = lab.l();
            for m in 0..=l.min(k - taken) {
                let mut e = exp + qp * m * (l - m);
                if m > 0 {
                    e += qp * taken * m;
                    e += m * d.root_pairing(right_deg, &RootVec::simple(d.rank(), j, 1));
                    nus.push(Label::new(j, m as usize));
                }
                if m < l {
                    right.push(Label::new(j, (l - m) as usize));
                    right_deg.0[j] += l - m;
                }
                go(
                    fa,
                    x,
                    pos + 1,
                    taken + m,
                    right,
                    right_deg,
                    e,
                    nus,
                    j,
                    k,
                    qp,
                    out,
                );
                if m < l {
                    right.pop();
                    right_deg.0[j] -= l - m;
                }
                if m > 0 {
                    nus.pop();
                }
            }
        }
        let mut right = Vec::new();
        let mut rd = RootVec::zero(d.rank());
        let mut nus = Vec::new();
        go(
            self, x, 0, 0, &mut right, &mut rd, 0, &mut nus, j, k, qp, &mut out,
        );
        let mut v: Vec<(Word, Scalar)> = out.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// `{a, b}` on monomials, by recursion on the first letter of `b`.
    pub fn word_form(&self, a: &[Label], b: &[Label]) -> Scalar {
        if a.len() + b.len() == 0 {
            return Scalar::one();
        }
        let d = &*self.datum;
        if word_degree(d, a) != word_degree(d, b) {
            return Scalar::zero();
        }
        let key = (a.to_vec(), b.to_vec());
        if let Some(v) = self.memo.read().get(&key) {
            return v.clone();
        }
        let first = b[0];
        let rest = &b[1..];
        let mut acc = Scalar::zero();
        for (r, c) in self.split_leading(a, first.i(), first.l()) {
            let v = self.word_form(&r, rest);
            if !v.is_zero() {
                acc = &acc + &(&c * &v);
            }
        }
        self.memo.write().insert(key, acc.clone());
        acc
    }

    pub fn form(&self, x: &FreeElem, y: &FreeElem) -> Scalar {
        let mut acc = Scalar::zero();
        for (a, ca) in x {
            for (b, cb) in y {
                let v = self.word_form(a, b);
                if !v.is_zero() {
                    acc = &acc + &(&(ca * cb) * &v);
                }
            }
        }
        acc
    }

    /// `{x1 (x) x2, y1 (x) y2} = {x1, y1}{x2, y2}`.
    pub fn tensor_form(&self, u: &TensorElem, v: &TensorElem) -> Scalar {
        let mut acc = Scalar::zero();
        for ((a1, a2), cu) in u {
            for ((b1, b2), cv) in v {
                let f1 = self.word_form(a1, b1);
                if f1.is_zero() {
                    continue;
                }
                let f2 = self.word_form(a2, b2);
                if !f2.is_zero() {
                    acc = &acc + &(&(cu * cv) * &(&f1 * &f2));
                }
            }
        }
        acc
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().len()
    }

    fn check_height(&self, beta: &RootVec) -> Result<()> {
        let h = beta.height().max(0) as usize;
        if h > self.height_budget {
            return Err(Error::budget(
                format!("height of degree {beta:?}"),
                h,
                self.height_budget,
            ));
        }
        Ok(())
    }

    fn cache_path(&self, beta: &RootVec) -> Option<PathBuf> {
        let dir = self.cache_dir.as_ref()?;
        let tag: Vec<String> = beta.0.iter().map(|k| k.to_string()).collect();
        Some(dir.join(format!(
            "gram-{}-{}.json",
            self.datum.content_hash(),
            tag.join("_")
        )))
    }

    fn load_cached(&self, path: &Path, beta: &RootVec) -> Option<(Vec<Word>, linalg::Matrix)> {
        let text = std::fs::read_to_string(path).ok()?;
        let f: GramFile = serde_json::from_str(&text).ok()?;
        if f.degree != beta.0 {
            return None;
        }
        let basis: Vec<Word> = f
            .basis
            .iter()
            .map(|w| w.iter().map(|&(i, l)| Label { idx: i, l }).collect())
            .collect();
        let matrix: Option<linalg::Matrix> = f
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| s.parse().ok()).collect())
            .collect();
        let matrix = matrix?;
        if basis != words_of_degree(&self.datum, beta) || matrix.len() != basis.len() {
            return None;
        }
        Some((basis, matrix))
    }

    fn store_cached(
        &self,
        path: &Path,
        beta: &RootVec,
        basis: &[Word],
        matrix: &linalg::Matrix,
    ) -> Result<()> {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        let f = GramFile {
            degree: beta.0.clone(),
            basis: basis
                .iter()
                .map(|w| w.iter().map(|l| (l.idx, l.l)).collect())
                .collect(),
            matrix: matrix
                .iter()
                .map(|r| r.iter().map(|s| s.to_string()).collect())
                .collect(),
        };
        let text = serde_json::to_string(&f).map_err(|e| Error::Io(e.to_string()))?;
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, text)?;
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Gram table of `beta` (memoized, optionally backed by the disk cache).
    pub fn gram(&self, beta: &RootVec) -> Result<Arc<GramTable>> {
        self.check_height(beta)?;
        if let Some(g) = self.grams.read().get(beta) {
            return Ok(g.clone());
        }
        let cached = self
            .cache_path(beta)
            .and_then(|p| self.load_cached(&p, beta));
        let (basis, matrix) = match cached {
            Some(bm) => bm,
            None => {
                let basis = words_of_degree(&self.datum, beta);
                let matrix: linalg::Matrix = basis
                    .iter()
                    .map(|a| basis.iter().map(|b| self.word_form(a, b)).collect())
                    .collect();
                if let Some(p) = self.cache_path(beta) {
                    self.store_cached(&p, beta, &basis, &matrix)?;
                }
                (basis, matrix)
            }
        };
        let (rank, pivots) = linalg::bareiss_rank(&matrix);
        let table = Arc::new(GramTable {
            degree: beta.clone(),
            basis,
            matrix,
            rank,
            pivots,
        });
        self.grams
            .write()
            .entry(beta.clone())
            .or_insert(table.clone());
        Ok(table)
    }

    /// `true` iff `{x, m} = 0` for every monomial `m` of the degree of `x`.
    pub fn radical_member(&self, x: &FreeElem) -> Result<bool> {
        let Some(beta) = homogeneous_degree(&self.datum, x)? else {
            return Ok(true);
        };
        self.check_height(&beta)?;
        for m in words_of_degree(&self.datum, &beta) {
            let mut acc = Scalar::zero();
            for (w, c) in x {
                let v = self.word_form(w, &m);
                if !v.is_zero() {
                    acc = &acc + &(c * &v);
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `sum_{r+s=m} (-1)^r q_i^{sign r(-a_ij n - m + 1)} e_i^{(r)} e_{j,c} e_i^{(s)}`.
    pub fn serre_element(
        &self,
        i: usize,
        j: usize,
        n: i64,
        m: i64,
        comp: &[i64],
        sign: i64,
    ) -> Result<FreeElem> {
        let d = &*self.datum;
        d.require_real(i)?;
        if i == j || j >= d.rank() {
            return Err(Error::domain("Serre element needs j distinct from i"));
        }
        if n < 0 || m <= -d.a(i, j) * n {
            return Err(Error::domain(format!(
                "need m > -a_ij n (m = {m}, n = {n}, a_ij = {})",
                d.a(i, j)
            )));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::domain("sign must be +1 or -1"));
        }
        let middle: FreeElem = if d.is_real(j) {
            divided_power(d, j, n as usize)
        } else {
            if comp.iter().sum::<i64>() != n || comp.iter().any(|&c| c <= 0) {
                return Err(Error::domain(format!(
                    "{comp:?} is not a composition of {n}"
                )));
            }
            for &c in comp {
                d.check_label(Label::new(j, c as usize))?;
            }
            Lin::basis(comp.iter().map(|&c| Label::new(j, c as usize)).collect())
        };
        let mut out = Lin::zero();
        let e = -d.a(i, j) * n - m + 1;
        for r in 0..=m {
            let s = m - r;
            let coeff = Scalar::int(if r % 2 == 0 { 1 } else { -1 })
                * Scalar::q_pow(sign * r * e * d.qi(i));
            let t = multiply(
                &multiply(&divided_power(d, i, r as usize), &middle),
                &divided_power(d, i, s as usize),
            );
            out.add_scaled(&t, &coeff);
        }
        Ok(out)
    }
}

/// `e_{i,l}` style rendering with index names.
pub fn render_word(d: &Datum, w: &[Label], letter: &str) -> String {
    if w.is_empty() {
        return "1".into();
    }
    let mut s = String::new();
    for lab in w {
        let _ = write!(s, "{letter}_{{{},{}}}", d.name(lab.i()), lab.l);
    }
    s
}

pub fn render(d: &Datum, x: &FreeElem, letter: &str) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (w, c)) in x.iter().enumerate() {
        let cs = c.to_string();
        let (neg, body) = match cs.strip_prefix('-') {
            Some(rest) if !rest.contains(['+', '-']) => (true, rest.to_string()),
            _ => (false, cs.clone()),
        };
        let body = if body.contains(['+', '-']) {
            format!("({body})")
        } else {
            body
        };
        if n > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let word = render_word(d, w, letter);
        if body == "1" {
            out.push_str(&word);
        } else if word == "1" {
            out.push_str(&body);
        } else {
            let _ = write!(out, "{body}*{word}");
        }
    }
    out
}

/// Human-oriented rendering: the term on `leading` comes first, signs are
/// typeset as ` − ` and coefficients are joined to words by `·`, as in
/// `e_{i,2} − 1/2·e_{i,1}e_{i,1}`.
pub fn render_display(d: &Datum, x: &FreeElem, letter: &str, leading: Option<&Word>) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<(&Word, &Scalar)> = x.iter().collect();
    if let Some(lead) = leading {
        terms.sort_by_key(|(w, _)| *w != lead);
    }
    let mut out = String::new();
    for (n, (w, c)) in terms.into_iter().enumerate() {
        let neg_c = -c;
        let negative = c.to_string().starts_with('-') && !neg_c.to_string().starts_with('-');
        let body = if negative { neg_c.to_string() } else { c.to_string() };
        let compound = body
            .char_indices()
            .any(|(k, ch)| ch == '+' || (ch == '-' && k > 0 && !body[..k].ends_with('^')));
        let body = if compound { format!("({body})") } else { body };
        match (n, negative) {
            (0, true) => out.push('−'),
            (0, false) => {}
            (_, true) => out.push_str(" − "),
            (_, false) => out.push_str(" + "),
        }
        let word = render_word(d, w, letter);
        if body == "1" {
            out.push_str(&word);
        } else if word == "1" {
            out.push_str(&body);
        } else {
            let _ = write!(out, "{body}·{word}");
        }
    }
    out
}
