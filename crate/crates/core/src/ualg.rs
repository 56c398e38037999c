//! The full algebra `U` in triangular normal form `sum c * y K^h x`, with `y`
//! a basis word in the negative generators `b_{il}`, `h` a coweight and `x` a
//! basis word in the positive generators `a_{il}`; the involutions, the
//! Lusztig symmetries as substitution endomorphisms and the operator families.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use parking_lot::RwLock;

use crate::cartan::{Coweight, Datum, Label, RootVec};
use crate::error::{Error, Result};
use crate::freealg::{concat, render_word, Word};
use crate::lin::Lin;
use crate::scalar::Scalar;
use crate::uplus::{PElem, Side, UPlus};

/// One normal-form monomial `y K^h x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub y: Word,
    pub h: Coweight,
    pub x: Word,
}

pub type UElem = Lin<Term>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Involution {
    Omega,
    /// `omega` twisted so that every real `a_j` goes to `B_j`.
    Varpi,
    /// `omega` twisted at one real index: `a_i` goes to `B_i`, every other
    /// generator `a_jl` to `b_jl`.
    VarpiAt(usize),
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `L'_{i,e}`
    Lp,
    /// `L''_{i,e}`
    Lpp,
}

/// A symmetry `L'_{i,e}` or `L''_{i,e}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymOp {
    pub variant: Variant,
    pub i: usize,
    pub e: i64,
}

impl SymOp {
    pub fn new(variant: Variant, i: usize, e: i64) -> Result<Self> {
        if e != 1 && e != -1 {
            return Err(Error::domain(format!(
                "symmetry sign must be +1 or -1 (got {e})"
            )));
        }
        Ok(SymOp { variant, i, e })
    }

    /// The inverse symmetry: `L'_{i,e}` and `L''_{i,-e}` are mutually inverse.
    pub fn inverse(self) -> SymOp {
        let variant = match self.variant {
            Variant::Lp => Variant::Lpp,
            Variant::Lpp => Variant::Lp,
        };
        SymOp {
            variant,
            i: self.i,
            e: -self.e,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyKind {
    /// `F_{i,j,n,m,e}`
    F,
    /// `F'_{i,j,n,m,e}`
    Fp,
    /// `G_{i,j,n,m,e}`
    G,
    /// `G'_{i,j,n,m,e}`
    Gp,
}

type WordMemo = RwLock<HashMap<(SymOp, bool, Word), Arc<UElem>>>;

pub struct UAlg {
    up: Arc<UPlus>,
    datum: Arc<Datum>,
    straighten_memo: RwLock<HashMap<(Word, Word), Arc<UElem>>>,
    sym_memo: WordMemo,
}

impl UAlg {
    pub fn new(up: Arc<UPlus>) -> Self {
        let datum = up.prims().free().datum_arc().clone();
        UAlg {
            up,
            datum,
            straighten_memo: RwLock::new(HashMap::new()),
            sym_memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn uplus(&self) -> &Arc<UPlus> {
        &self.up
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    fn zero_h(&self) -> Coweight {
        Coweight::zero(self.datum.rank())
    }

    pub fn one(&self) -> UElem {
        self.scalar(Scalar::one())
    }

    pub fn scalar(&self, c: Scalar) -> UElem {
        Lin::single(
            Term {
                y: Vec::new(),
                h: self.zero_h(),
                x: Vec::new(),
            },
            c,
        )
    }

    /// `q^h`.
    pub fn k(&self, h: Coweight) -> UElem {
        Lin::basis(Term {
            y: Vec::new(),
            h,
            x: Vec::new(),
        })
    }

    /// `K_i^l`.
    pub fn k_i(&self, i: usize, l: i64) -> UElem {
        self.k(self.datum.k_power(i, l))
    }

    pub fn a(&self, lab: Label) -> Result<UElem> {
        self.datum.check_label(lab)?;
        Ok(Lin::basis(Term {
            y: Vec::new(),
            h: self.zero_h(),
            x: vec![lab],
        }))
    }

    pub fn b(&self, lab: Label) -> Result<UElem> {
        self.datum.check_label(lab)?;
        Ok(Lin::basis(Term {
            y: vec![lab],
            h: self.zero_h(),
            x: Vec::new(),
        }))
    }

    /// `c_i = tau_i (q_i^{-1} - q_i)`, so that `B_i = b_i / c_i`.
    pub fn b_scale(&self, i: usize) -> Result<Scalar> {
        self.datum.require_real(i)?;
        let qi = self.datum.qi(i);
        let t = self.up.tau(Label::new(i, 1))?;
        Ok(&t * &Scalar::laurent(&[(-qi, 1), (qi, -1)]))
    }

    pub fn big_b(&self, i: usize) -> Result<UElem> {
        let c = self.b_scale(i)?;
        Ok(self.b(Label::new(i, 1))?.scale(&c.inv()?))
    }

    pub fn from_pos(&self, x: &PElem) -> UElem {
        x.map_keys(|w| Term {
            y: Vec::new(),
            h: self.zero_h(),
            x: w.clone(),
        })
    }

    pub fn from_neg(&self, y: &PElem) -> UElem {
        y.map_keys(|w| Term {
            y: w.clone(),
            h: self.zero_h(),
            x: Vec::new(),
        })
    }

    /// The `U^+` part when every term is purely positive.
    pub fn pos_part(&self, u: &UElem) -> Option<PElem> {
        let mut out = Lin::zero();
        for (t, c) in u {
            if !t.y.is_empty() || !t.h.is_zero() {
                return None;
            }
            out.add_term(t.x.clone(), c.clone());
        }
        Some(out)
    }

    /// The `U^-` part (as words in the `b` letters) when every term is purely negative.
    pub fn neg_part(&self, u: &UElem) -> Option<PElem> {
        let mut out = Lin::zero();
        for (t, c) in u {
            if !t.x.is_empty() || !t.h.is_zero() {
                return None;
            }
            out.add_term(t.y.clone(), c.clone());
        }
        Some(out)
    }

    pub fn is_positive(&self, u: &UElem) -> bool {
        self.pos_part(u).is_some()
    }

    pub fn is_negative(&self, u: &UElem) -> bool {
        self.neg_part(u).is_some()
    }

    /// `a_i^{(n)}`.
    pub fn a_div(&self, i: usize, n: i64) -> Result<UElem> {
        Ok(self.from_pos(&self.up.divided_power(i, n)?))
    }

    /// `B_i^{(n)} = B_i^n / [n]_i!`.
    pub fn big_b_div(&self, i: usize, n: i64) -> Result<UElem> {
        let y = self.up.divided_power(i, n)?;
        let c = self.b_scale(i)?;
        Ok(self.from_neg(&y).scale(&c.pow(-n)))
    }

    /// `a_{jn}`: `1` for `n = 0`, `a_j^{(n)}` for real `j`, the generator `a_{jn}` otherwise.
    pub fn a_jn(&self, j: usize, n: i64) -> Result<UElem> {
        if n < 0 {
            return Err(Error::domain("negative level"));
        }
        if n == 0 {
            return Ok(self.one());
        }
        if self.datum.is_real(j) {
            self.a_div(j, n)
        } else {
            self.a(Label::new(j, n as usize))
        }
    }

    /// `b_{jn}` with the same conventions as [`UAlg::a_jn`].
    pub fn b_jn(&self, j: usize, n: i64) -> Result<UElem> {
        if n < 0 {
            return Err(Error::domain("negative level"));
        }
        if n == 0 {
            return Ok(self.one());
        }
        if self.datum.is_real(j) {
            let y = self.up.divided_power(j, n)?;
            Ok(self.from_neg(&y))
        } else {
            self.b(Label::new(j, n as usize))
        }
    }

    fn on(&self, deg: &RootVec, h: &Coweight) -> i64 {
        self.datum.root_on(deg, h)
    }

    fn left_mul_neg_word(&self, w: &[Label], u: &UElem) -> Result<UElem> {
        let mut out = Lin::zero();
        for (t, c) in u {
            let r = self.up.reduce_word(&concat(w, &t.y))?;
            for (y, cy) in r.iter() {
                out.add_term(
                    Term {
                        y: y.clone(),
                        h: t.h.clone(),
                        x: t.x.clone(),
                    },
                    c * cy,
                );
            }
        }
        Ok(out)
    }

    /// `x * y` for a positive word `x` and a negative word `y`, in normal form.
    fn straighten(&self, x: &[Label], y: &[Label]) -> Result<Arc<UElem>> {
        let key = (x.to_vec(), y.to_vec());
        if let Some(v) = self.straighten_memo.read().get(&key) {
            return Ok(v.clone());
        }
        let out = if x.is_empty() || y.is_empty() {
            let ry = self.up.reduce_word(y)?;
            let rx = self.up.reduce_word(x)?;
            let mut out = Lin::zero();
            for (wy, cy) in ry.iter() {
                for (wx, cx) in rx.iter() {
                    out.add_term(
                        Term {
                            y: wy.clone(),
                            h: self.zero_h(),
                            x: wx.clone(),
                        },
                        cy * cx,
                    );
                }
            }
            out
        } else {
            // x b_c = b_c x - tau_c delta_c(x) K_c + tau_c K_c^{-1} delta^c(x)
            let c = y[0];
            let rest = &y[1..];
            let mut out = self.left_mul_neg_word(&[c], &*self.straighten(x, rest)?)?;
            let tau = self.up.tau(c)?;
            let k = self.datum.k_power(c.i(), c.l());
            let rest_shift = -self.on(&self.up.degree(rest), &k);
            for (w, cw) in self.up.delta_word(c, Side::Lower, x)? {
                let base = &(&tau * &cw) * &Scalar::q_pow(rest_shift);
                for (t, ct) in self.straighten(&w, rest)?.iter() {
                    let e = -self.on(&self.up.degree(&t.x), &k);
                    let coef = -(&(&base * ct) * &Scalar::q_pow(e));
                    out.add_term(
                        Term {
                            y: t.y.clone(),
                            h: t.h.add(&k),
                            x: t.x.clone(),
                        },
                        coef,
                    );
                }
            }
            let kinv = k.neg();
            for (w, cw) in self.up.delta_word(c, Side::Upper, x)? {
                let base = &tau * &cw;
                for (t, ct) in self.straighten(&w, rest)?.iter() {
                    let e = self.on(&self.up.degree(&t.y), &k);
                    let coef = &(&base * ct) * &Scalar::q_pow(e);
                    out.add_term(
                        Term {
                            y: t.y.clone(),
                            h: t.h.add(&kinv),
                            x: t.x.clone(),
                        },
                        coef,
                    );
                }
            }
            out
        };
        let out = Arc::new(out);
        self.straighten_memo.write().insert(key, out.clone());
        Ok(out)
    }

    pub fn mul(&self, u: &UElem, v: &UElem) -> Result<UElem> {
        let mut out = Lin::zero();
        for (t1, c1) in u {
            for (t2, c2) in v {
                let c12 = c1 * c2;
                let mid = self.straighten(&t1.x, &t2.y)?;
                for (t, ct) in mid.iter() {
                    let e = -self.on(&self.up.degree(&t.y), &t1.h)
                        - self.on(&self.up.degree(&t.x), &t2.h);
                    let coef = &(&c12 * ct) * &Scalar::q_pow(e);
                    let h = t1.h.add(&t.h).add(&t2.h);
                    let ry = self.up.reduce_word(&concat(&t1.y, &t.y))?;
                    let rx = self.up.reduce_word(&concat(&t.x, &t2.x))?;
                    for (wy, cy) in ry.iter() {
                        for (wx, cx) in rx.iter() {
                            out.add_term(
                                Term {
                                    y: wy.clone(),
                                    h: h.clone(),
                                    x: wx.clone(),
                                },
                                &(&coef * cy) * cx,
                            );
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_all(&self, xs: &[&UElem]) -> Result<UElem> {
        let mut acc = self.one();
        for x in xs {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    /// `u v - v u`.
    pub fn commutator(&self, u: &UElem, v: &UElem) -> Result<UElem> {
        Ok(self.mul(u, v)?.sub(&self.mul(v, u)?))
    }

    pub fn pow(&self, u: &UElem, n: u32) -> Result<UElem> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, u)?;
        }
        Ok(acc)
    }

    /// Root-lattice degree `|x| - |y|` of a term.
    pub fn term_degree(&self, t: &Term) -> RootVec {
        self.up.degree(&t.x).sub(&self.up.degree(&t.y))
    }

    /// Real-index letters in a word (or only those of index `at`) get the
    /// `varpi` rescaling.
    fn varpi_factor(&self, w: &[Label], at: Option<usize>) -> Result<Scalar> {
        let mut acc = Scalar::one();
        for lab in w {
            if self.datum.is_real(lab.i()) && at.is_none_or(|i| i == lab.i()) {
                acc = &acc * &self.b_scale(lab.i())?;
            }
        }
        Ok(acc)
    }

    pub fn involution(&self, kind: Involution, u: &UElem) -> Result<UElem> {
        let mut out = Lin::zero();
        for (t, c) in u {
            let hneg = t.h.neg();
            let img = match kind {
                Involution::Omega | Involution::Varpi | Involution::VarpiAt(_) => {
                    let pos = self.from_pos(&Lin::basis(t.y.clone()));
                    let neg = self.from_neg(&Lin::basis(t.x.clone()));
                    let v = self.mul_all(&[&pos, &self.k(hneg), &neg])?;
                    let at = match kind {
                        Involution::Omega => None,
                        Involution::VarpiAt(i) => {
                            self.datum.require_real(i)?;
                            Some(Some(i))
                        }
                        _ => Some(None),
                    };
                    match at {
                        None => v,
                        Some(at) => v.scale(
                            &(&self.varpi_factor(&t.y, at)? / &self.varpi_factor(&t.x, at)?),
                        ),
                    }
                }
                Involution::Star => {
                    let mut rx = t.x.clone();
                    rx.reverse();
                    let mut ry = t.y.clone();
                    ry.reverse();
                    let pos = self.from_pos(&self.up.word(&rx)?);
                    let neg = self.from_neg(&self.up.word(&ry)?);
                    self.mul_all(&[&pos, &self.k(hneg), &neg])?
                }
            };
            out.add_scaled(&img, c);
        }
        Ok(out)
    }

    fn sum_over_split(
        &self,
        total: i64,
        mut f: impl FnMut(i64, i64) -> Result<(Scalar, UElem)>,
    ) -> Result<UElem> {
        let mut out = Lin::zero();
        for r in 0..=total {
            let (c, t) = f(r, total - r)?;
            out.add_scaled(&t, &c);
        }
        Ok(out)
    }

    fn sign(r: i64) -> Scalar {
        Scalar::int(if r % 2 == 0 { 1 } else { -1 })
    }

    /// Image of a single generator letter (positive when `neg` is false).
    pub fn symmetry_letter(&self, op: SymOp, lab: Label, neg: bool) -> Result<UElem> {
        let d = &*self.datum;
        let i = op.i;
        d.require_real(i)?;
        let qi = d.qi(i);
        // Both tables are written with the sign `e` such that the map is
        // `L'_{i,e}` or `L''_{i,-e}`.
        let e = match op.variant {
            Variant::Lp => op.e,
            Variant::Lpp => -op.e,
        };
        if lab.i() == i {
            let cb = self.b_scale(i)?;
            let bi = self.big_b(i)?;
            let ai = self.a(lab)?;
            let m1 = Scalar::int(-1);
            return match (op.variant, neg) {
                (Variant::Lp, false) => Ok(self.mul(&self.k_i(i, e), &bi)?.scale(&m1)),
                (Variant::Lp, true) => Ok(self.mul(&ai, &self.k_i(i, -e))?.scale(&-cb)),
                (Variant::Lpp, false) => Ok(self.mul(&bi, &self.k_i(i, -e))?.scale(&m1)),
                (Variant::Lpp, true) => Ok(self.mul(&self.k_i(i, e), &ai)?.scale(&-cb)),
            };
        }
        let total = -(lab.l()) * d.a(i, lab.i());
        let gen = if neg { self.b(lab)? } else { self.a(lab)? };
        self.sum_over_split(total, |r, s| {
            let c = &Self::sign(r) * &Scalar::q_pow(if neg { -e * r * qi } else { e * r * qi });
            let t = match (op.variant, neg) {
                (Variant::Lp, false) => {
                    self.mul_all(&[&self.a_div(i, r)?, &gen, &self.a_div(i, s)?])?
                }
                (Variant::Lp, true) => {
                    self.mul_all(&[&self.big_b_div(i, s)?, &gen, &self.big_b_div(i, r)?])?
                }
                (Variant::Lpp, false) => {
                    self.mul_all(&[&self.a_div(i, s)?, &gen, &self.a_div(i, r)?])?
                }
                (Variant::Lpp, true) => {
                    self.mul_all(&[&self.big_b_div(i, r)?, &gen, &self.big_b_div(i, s)?])?
                }
            };
            Ok((c, t))
        })
    }

    fn symmetry_word(&self, op: SymOp, neg: bool, w: &[Label]) -> Result<Arc<UElem>> {
        if w.is_empty() {
            return Ok(Arc::new(self.one()));
        }
        let key = (op, neg, w.to_vec());
        if let Some(v) = self.sym_memo.read().get(&key) {
            return Ok(v.clone());
        }
        let (init, last) = w.split_at(w.len() - 1);
        let head = self.symmetry_word(op, neg, init)?;
        let tail = self.symmetry_word_letter(op, neg, last[0])?;
        let out = Arc::new(self.mul(&head, &tail)?);
        self.sym_memo.write().insert(key, out.clone());
        Ok(out)
    }

    fn symmetry_word_letter(&self, op: SymOp, neg: bool, lab: Label) -> Result<Arc<UElem>> {
        let key = (op, neg, vec![lab]);
        if let Some(v) = self.sym_memo.read().get(&key) {
            return Ok(v.clone());
        }
        let out = Arc::new(self.symmetry_letter(op, lab, neg)?);
        self.sym_memo.write().insert(key, out.clone());
        Ok(out)
    }

    /// `L'_{i,e}(u)` or `L''_{i,e}(u)`.
    pub fn symmetry(&self, op: SymOp, u: &UElem) -> Result<UElem> {
        self.datum.require_real(op.i)?;
        let mut out = Lin::zero();
        for (t, c) in u {
            let y = self.symmetry_word(op, true, &t.y)?;
            let h = self.datum.reflect_coweight(op.i, &t.h)?;
            let x = self.symmetry_word(op, false, &t.x)?;
            out.add_scaled(&self.mul_all(&[&y, &self.k(h), &x])?, c);
        }
        Ok(out)
    }

    /// `L_{i_1,e} L_{i_2,e} ... L_{i_N,e}(u)` along a reduced word.
    pub fn braid_apply(
        &self,
        variant: Variant,
        word: &[usize],
        e: i64,
        u: &UElem,
    ) -> Result<UElem> {
        if !self.datum.is_reduced(word)? {
            return Err(Error::domain(format!("word {word:?} is not reduced")));
        }
        let mut acc = u.clone();
        for &i in word.iter().rev() {
            acc = self.symmetry(SymOp::new(variant, i, e)?, &acc)?;
        }
        Ok(acc)
    }

    /// The families `F`, `F'`, `G`, `G'` indexed by `(i, j, n, m, e)`.
    pub fn family(
        &self,
        kind: FamilyKind,
        i: usize,
        j: usize,
        n: i64,
        m: i64,
        e: i64,
    ) -> Result<UElem> {
        let d = &*self.datum;
        d.require_real(i)?;
        if i == j {
            return Err(Error::domain("family needs j different from i"));
        }
        if n < 0 {
            return Err(Error::domain("family needs n >= 0"));
        }
        if m < 0 {
            return Ok(Lin::zero());
        }
        let qi = d.qi(i);
        let bn = -d.a(i, j) * n;
        let mid = match kind {
            FamilyKind::F | FamilyKind::Fp => self.a_jn(j, n)?,
            FamilyKind::G | FamilyKind::Gp => self.b_jn(j, n)?,
        };
        self.sum_over_split(m, |r, s| {
            let ex = match kind {
                FamilyKind::F | FamilyKind::Fp => e * r * (bn - m + 1),
                FamilyKind::G | FamilyKind::Gp => -e * r * (bn - m + 1),
            };
            let c = &Self::sign(r) * &Scalar::q_pow(qi * ex);
            let t = match kind {
                FamilyKind::F => self.mul_all(&[&self.a_div(i, r)?, &mid, &self.a_div(i, s)?])?,
                FamilyKind::Fp => self.mul_all(&[&self.a_div(i, s)?, &mid, &self.a_div(i, r)?])?,
                FamilyKind::G => {
                    self.mul_all(&[&self.big_b_div(i, s)?, &mid, &self.big_b_div(i, r)?])?
                }
                FamilyKind::Gp => {
                    self.mul_all(&[&self.big_b_div(i, r)?, &mid, &self.big_b_div(i, s)?])?
                }
            };
            Ok((c, t))
        })
    }

    /// `f(i,(j,l),m)`, `f'`, `g`, `g'` of the bilinear-form section.
    pub fn f_family(&self, kind: FamilyKind, i: usize, jl: Label, m: i64) -> Result<UElem> {
        let d = &*self.datum;
        d.require_real(i)?;
        d.check_label(jl)?;
        if m < 0 {
            return Ok(Lin::zero());
        }
        let qi = d.qi(i);
        let la = jl.l() * d.a(i, jl.i());
        let (mid, neg) = match kind {
            FamilyKind::F | FamilyKind::Fp => (self.a(jl)?, false),
            FamilyKind::G | FamilyKind::Gp => (self.b(jl)?, true),
        };
        let mut out = Lin::zero();
        for k in 0..=m {
            let ex = if neg {
                k * (-la - m + 1)
            } else {
                k * (la + m - 1)
            };
            let c = &Self::sign(k) * &Scalar::q_pow(qi * ex);
            let t = match kind {
                FamilyKind::F => {
                    self.mul_all(&[&self.a_div(i, k)?, &mid, &self.a_div(i, m - k)?])?
                }
                FamilyKind::Fp => {
                    self.mul_all(&[&self.a_div(i, m - k)?, &mid, &self.a_div(i, k)?])?
                }
                FamilyKind::G => {
                    self.mul_all(&[&self.big_b_div(i, m - k)?, &mid, &self.big_b_div(i, k)?])?
                }
                FamilyKind::Gp => {
                    self.mul_all(&[&self.big_b_div(i, k)?, &mid, &self.big_b_div(i, m - k)?])?
                }
            };
            out.add_scaled(&t, &c);
        }
        Ok(out)
    }

    /// The pairing `{y, x} = {omega(y), x}` of a negative and a positive element.
    pub fn form_pm(&self, y: &UElem, x: &UElem) -> Result<Scalar> {
        let yn = self
            .neg_part(y)
            .ok_or_else(|| Error::Contract("left argument is not in U^-".into()))?;
        let xp = self
            .pos_part(x)
            .ok_or_else(|| Error::Contract("right argument is not in U^+".into()))?;
        self.up.form(&yn, &xp)
    }

    /// `q_i`-exponent of `K_i u K_i^{-1}` for a homogeneous element.
    pub fn k_grade(&self, i: usize, u: &UElem) -> Option<i64> {
        let mut grade = None;
        for (t, _) in u {
            let g = self
                .datum
                .root_on(&self.term_degree(t), &self.datum.k_power(i, 1))
                / self.datum.qi(i);
            match grade {
                None => grade = Some(g),
                Some(x) if x != g => return None,
                _ => {}
            }
        }
        grade
    }

    /// Human-readable rendering, e.g. `(q^-1)*b_{i,1} K[h=1,0] a_{j,1}`.
    pub fn render(&self, u: &UElem) -> String {
        if u.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (t, c)) in u.iter().enumerate() {
            if n > 0 {
                out.push_str(" + ");
            }
            let _ = write!(out, "({c})");
            if !t.y.is_empty() {
                let _ = write!(out, "*{}", render_word(&self.datum, &t.y, "b"));
            }
            if !t.h.is_zero() {
                let _ = write!(out, "*q^[h={:?},d={:?}]", t.h.h, t.h.d);
            }
            if !t.x.is_empty() {
                let _ = write!(out, "*{}", render_word(&self.datum, &t.x, "a"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::FreeAlgebra;
    use crate::primitive::Primitives;

    fn ualg(json: &str) -> UAlg {
        let d = Arc::new(Datum::from_json(json).unwrap());
        UAlg::new(Arc::new(UPlus::new(Arc::new(Primitives::new(Arc::new(
            FreeAlgebra::new(d),
        ))))))
    }

    const A1: &str = r#"{"indices":[{"name":"i","a_ii":2,"s":1}]}"#;

    #[test]
    fn drinfeld_commutator() {
        let u = ualg(A1);
        let a = u.a(Label::new(0, 1)).unwrap();
        let b = u.b(Label::new(0, 1)).unwrap();
        let lhs = u.commutator(&a, &b).unwrap();
        let tau = u.uplus().tau(Label::new(0, 1)).unwrap();
        let rhs = u.k_i(0, -1).sub(&u.k_i(0, 1)).scale(&tau);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn associativity_small() {
        let u = ualg(A1);
        let a = u.a(Label::new(0, 1)).unwrap();
        let b = u.b(Label::new(0, 1)).unwrap();
        let k = u.k_i(0, 1);
        let left = u
            .mul(&u.mul(&a, &b).unwrap(), &u.mul(&k, &a).unwrap())
            .unwrap();
        let right = u
            .mul(&a, &u.mul(&u.mul(&b, &k).unwrap(), &a).unwrap())
            .unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn symmetry_inverse_on_generators() {
        let u = ualg(A1);
        for e in [1, -1] {
            let lp = SymOp::new(Variant::Lp, 0, e).unwrap();
            for g in [
                u.a(Label::new(0, 1)).unwrap(),
                u.b(Label::new(0, 1)).unwrap(),
                u.k_i(0, 1),
            ] {
                let img = u.symmetry(lp.inverse(), &g).unwrap();
                assert_eq!(u.symmetry(lp, &img).unwrap(), g);
            }
        }
    }
}
