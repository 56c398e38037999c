//! Highest-weight modules truncated at a depth: Verma modules and their
//! simple quotients, with exact actions of the generators.
//!
//! A simple highest-weight module has no nonzero vector below the top that
//! is killed by every raising generator. A vector at depth `beta` is therefore
//! determined by its images under all `a_{c}`, which live at smaller depths.
//! The simple quotient is built level by level from the spanning candidates
//! `b_c u`, whose raising images follow from the commutation rule
//! `a_{c'} b_c u = b_c a_{c'} u + [c = c'] tau_c (K_c^{-1} - K_c) u`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::cartan::{Coweight, Datum, Label, RootVec, Weight};
use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::linalg::{self, Matrix};
use crate::scalar::{q_fact, Scalar};
use crate::ualg::{UAlg, UElem};
use crate::uplus::Side;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    Verma,
    Irreducible,
}

/// A vector with coordinates per weight space `lambda - beta`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleVec {
    parts: BTreeMap<RootVec, Vec<Scalar>>,
}

impl ModuleVec {
    pub fn zero() -> Self {
        ModuleVec::default()
    }

    pub fn from_part(beta: RootVec, coords: Vec<Scalar>) -> Self {
        let mut v = ModuleVec::zero();
        v.add_part(&beta, &coords, &Scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&RootVec, &Vec<Scalar>)> {
        self.parts.iter()
    }

    pub fn part(&self, beta: &RootVec) -> Option<&Vec<Scalar>> {
        self.parts.get(beta)
    }

    /// The depths carrying a nonzero component.
    pub fn support(&self) -> Vec<RootVec> {
        self.parts.keys().cloned().collect()
    }

    fn add_part(&mut self, beta: &RootVec, coords: &[Scalar], c: &Scalar) {
        if c.is_zero() || coords.iter().all(Scalar::is_zero) {
            return;
        }
        let entry = self
            .parts
            .entry(beta.clone())
            .or_insert_with(|| vec![Scalar::zero(); coords.len()]);
        for (x, y) in entry.iter_mut().zip(coords) {
            if !y.is_zero() {
                *x = &*x + &(y * c);
            }
        }
        if entry.iter().all(Scalar::is_zero) {
            self.parts.remove(beta);
        }
    }

    pub fn add_scaled(&mut self, o: &ModuleVec, c: &Scalar) {
        for (b, v) in &o.parts {
            self.add_part(b, v, c);
        }
    }

    pub fn add(&self, o: &ModuleVec) -> ModuleVec {
        let mut r = self.clone();
        r.add_scaled(o, &Scalar::one());
        r
    }

    pub fn sub(&self, o: &ModuleVec) -> ModuleVec {
        let mut r = self.clone();
        r.add_scaled(o, &Scalar::int(-1));
        r
    }

    pub fn scale(&self, c: &Scalar) -> ModuleVec {
        let mut r = ModuleVec::zero();
        r.add_scaled(self, c);
        r
    }

    /// The single depth of a homogeneous nonzero vector.
    pub fn homogeneous_depth(&self) -> Option<&RootVec> {
        if self.parts.len() == 1 {
            self.parts.keys().next()
        } else {
            None
        }
    }
}

/// One weight space `M_{lambda - beta}`.
#[derive(Clone, Debug)]
pub struct Level {
    pub beta: RootVec,
    /// For each basis vector, a word `y` with the vector equal to `y v_lambda`
    /// (exactly for Verma modules, as its residue class for simple quotients).
    pub words: Vec<Word>,
}

impl Level {
    pub fn dim(&self) -> usize {
        self.words.len()
    }
}

/// Action of one generator on one weight space: the images of the basis
/// vectors in coordinates of the target weight space.
type ActionMap = HashMap<(Label, RootVec), Arc<Vec<Vec<Scalar>>>>;

pub struct HWModule {
    ua: Arc<UAlg>,
    datum: Arc<Datum>,
    lambda: Weight,
    depth: usize,
    kind: ModuleKind,
    labels: Vec<Label>,
    levels: BTreeMap<RootVec, Level>,
    lower: ActionMap,
    raise: ActionMap,
    warnings: Vec<String>,
}

/// Nonnegative integer vectors of the given rank and height, in lex order.
pub fn degrees_of_height(rank: usize, h: usize) -> Vec<RootVec> {
    fn go(rank: usize, left: usize, cur: &mut Vec<i64>, out: &mut Vec<RootVec>) {
        if cur.len() + 1 == rank {
            cur.push(left as i64);
            out.push(RootVec(cur.clone()));
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k as i64);
            go(rank, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if rank == 0 {
        return out;
    }
    go(rank, h, &mut Vec::new(), &mut out);
    out
}

impl HWModule {
    pub fn build(
        ua: Arc<UAlg>,
        lambda: Weight,
        depth: usize,
        kind: ModuleKind,
    ) -> Result<HWModule> {
        let datum = Arc::new(ua.datum().clone());
        let n = datum.rank();
        if lambda.h_values.len() != n || lambda.d_values.len() != n {
            return Err(Error::domain(format!(
                "weight has the wrong rank (datum rank {n})"
            )));
        }
        let mut warnings = Vec::new();
        if kind == ModuleKind::Irreducible {
            for i in datum.real_indices() {
                if lambda.h_values[i] < 0 {
                    return Err(Error::domain(format!(
                        "simple module needs a dominant weight: lambda(h_{}) = {} < 0",
                        datum.name(i),
                        lambda.h_values[i]
                    )));
                }
            }
        }
        for j in datum.imaginary_indices() {
            if (datum.max_l(j) as usize) < depth {
                warnings.push(format!(
                    "generators of index `{}` are capped at level {} below the depth {depth}; deeper weight spaces may be incomplete",
                    datum.name(j),
                    datum.max_l(j)
                ));
            }
        }
        let labels: Vec<Label> = datum
            .labels()
            .into_iter()
            .filter(|l| l.l() as usize <= depth.max(1))
            .collect();
        let mut m = HWModule {
            ua,
            datum,
            lambda,
            depth,
            kind,
            labels,
            levels: BTreeMap::new(),
            lower: HashMap::new(),
            raise: HashMap::new(),
            warnings,
        };
        let top = RootVec::zero(n);
        m.levels.insert(
            top.clone(),
            Level {
                beta: top,
                words: vec![Vec::new()],
            },
        );
        for h in 1..=depth {
            for beta in degrees_of_height(n, h) {
                match kind {
                    ModuleKind::Irreducible => m.build_simple_level(&beta)?,
                    ModuleKind::Verma => m.build_verma_level(&beta)?,
                }
            }
        }
        Ok(m)
    }

    pub fn ualg(&self) -> &Arc<UAlg> {
        &self.ua
    }

    pub fn datum(&self) -> &Datum {
        &self.datum
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn levels(&self) -> impl Iterator<Item = &Level> {
        self.levels.values()
    }

    pub fn level(&self, beta: &RootVec) -> Option<&Level> {
        self.levels.get(beta)
    }

    pub fn dim_at(&self, beta: &RootVec) -> usize {
        self.levels.get(beta).map_or(0, Level::dim)
    }

    /// Total dimension at each height `0..=depth`.
    pub fn dims_by_height(&self) -> Vec<usize> {
        let mut out = vec![0; self.depth + 1];
        for (b, l) in &self.levels {
            out[b.height() as usize] += l.dim();
        }
        out
    }

    pub fn weight_at(&self, beta: &RootVec) -> Weight {
        self.lambda.sub(&self.datum.root_weight(beta))
    }

    /// `mu(h_i)` for `mu = lambda - beta`.
    pub fn h_value(&self, beta: &RootVec, i: usize) -> i64 {
        let mut v = self.lambda.h_values[i];
        for (j, &k) in beta.0.iter().enumerate() {
            v -= k * self.datum.a(i, j);
        }
        v
    }

    /// Eigenvalue exponent of `q^h` on `M_{lambda - beta}`.
    fn k_exponent(&self, beta: &RootVec, h: &Coweight) -> i64 {
        self.lambda.eval(h) - self.datum.root_on(beta, h)
    }

    /// `tau_c (K_c^{-1} - K_c)` on `M_{lambda - beta}`.
    fn cartan_scalar(&self, c: Label, beta: &RootVec) -> Result<Scalar> {
        let k = self.datum.k_power(c.i(), c.l());
        let e = self.k_exponent(beta, &k);
        let t = self.ua.uplus().tau(c)?;
        Ok(&t * &Scalar::laurent(&[(-e, 1), (e, -1)]))
    }

    fn label_deg(&self, c: Label) -> RootVec {
        self.datum.label_root(c)
    }

    fn apply_map(&self, map: &[Vec<Scalar>], coords: &[Scalar], target_dim: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); target_dim];
        for (img, c) in map.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(img) {
                if !x.is_zero() {
                    *o = &*o + &(x * c);
                }
            }
        }
        out
    }

    fn unit(dim: usize, k: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        v[k] = Scalar::one();
        v
    }

    fn build_simple_level(&mut self, beta: &RootVec) -> Result<()> {
        // Candidates b_c u for basis vectors u one level up along c.
        let mut cands: Vec<(Label, usize)> = Vec::new();
        for &c in &self.labels {
            let src = beta.sub(&self.label_deg(c));
            if src.is_nonneg() {
                for u in 0..self.dim_at(&src) {
                    cands.push((c, u));
                }
            }
        }
        if cands.is_empty() {
            return Ok(());
        }
        // Raising signatures, grouped by raising label.
        let targets: Vec<(Label, RootVec, usize)> = self
            .labels
            .iter()
            .filter_map(|&c2| {
                let t = beta.sub(&self.label_deg(c2));
                let d = self.dim_at(&t);
                (t.is_nonneg() && d > 0).then_some((c2, t, d))
            })
            .collect();
        let mut sigs: Vec<Vec<Scalar>> = Vec::with_capacity(cands.len());
        for &(c, u) in &cands {
            let src = beta.sub(&self.label_deg(c));
            let e_u = Self::unit(self.dim_at(&src), u);
            let mut sig = Vec::new();
            for (c2, _, d) in &targets {
                // b_c a_{c2} u
                let mut block = vec![Scalar::zero(); *d];
                let mid = src.sub(&self.label_deg(*c2));
                if mid.is_nonneg() && self.dim_at(&mid) > 0 {
                    let up = self.raise_coords(*c2, &src, &e_u)?;
                    let down = self.lower_coords(c, &mid, &up)?;
                    block = down;
                }
                if *c2 == c {
                    let s = self.cartan_scalar(c, &src)?;
                    block[u] = &block[u] + &s;
                }
                sig.extend(block);
            }
            sigs.push(sig);
        }
        let rows = linalg::greedy_rows(&sigs);
        if rows.is_empty() {
            return Ok(());
        }
        // Express every candidate in the chosen basis: S_B x = sig.
        let nsig = sigs[0].len();
        let a: Matrix = (0..nsig)
            .map(|r| rows.iter().map(|&k| sigs[k][r].clone()).collect())
            .collect();
        let b: Matrix = (0..nsig)
            .map(|r| sigs.iter().map(|s| s[r].clone()).collect())
            .collect();
        let x = linalg::solve(&a, &b).ok_or_else(|| {
            Error::Internal(format!(
                "raising signatures at depth {:?} are not spanned by the chosen basis",
                beta.0
            ))
        })?;
        let dim = rows.len();
        // Lowering maps into this level.
        let mut lower_images: BTreeMap<Label, Vec<Vec<Scalar>>> = BTreeMap::new();
        for (k, &(c, _)) in cands.iter().enumerate() {
            lower_images
                .entry(c)
                .or_default()
                .push((0..dim).map(|r| x[r][k].clone()).collect());
        }
        for (c, imgs) in lower_images {
            let src = beta.sub(&self.label_deg(c));
            self.lower.insert((c, src), Arc::new(imgs));
        }
        // Raising maps out of this level.
        let mut offset = 0;
        for (c2, _, d) in &targets {
            let imgs: Vec<Vec<Scalar>> = rows
                .iter()
                .map(|&k| sigs[k][offset..offset + d].to_vec())
                .collect();
            self.raise.insert((*c2, beta.clone()), Arc::new(imgs));
            offset += d;
        }
        let words = rows
            .iter()
            .map(|&k| {
                let (c, u) = cands[k];
                let src = beta.sub(&self.label_deg(c));
                let mut w = vec![c];
                w.extend(self.levels[&src].words[u].iter().copied());
                w
            })
            .collect();
        self.levels.insert(
            beta.clone(),
            Level {
                beta: beta.clone(),
                words,
            },
        );
        Ok(())
    }

    fn build_verma_level(&mut self, beta: &RootVec) -> Result<()> {
        let up = self.ua.uplus().clone();
        let words = up.basis_of_degree(beta)?;
        if words.is_empty() {
            return Ok(());
        }
        let index: HashMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
        for &c in &self.labels {
            let src = beta.sub(&self.label_deg(c));
            let Some(src_level) = self.levels.get(&src) else {
                continue;
            };
            let mut imgs = Vec::new();
            for w in &src_level.words {
                let mut y = vec![c];
                y.extend(w.iter().copied());
                let r = up.reduce_word(&y)?;
                let mut v = vec![Scalar::zero(); words.len()];
                for (x, cx) in r.iter() {
                    v[index[x]] = cx.clone();
                }
                imgs.push(v);
            }
            self.lower.insert((c, src), Arc::new(imgs));
        }
        // a_c y v = tau_c (q^{-l s_i lambda(h_i)} delta_c(y) - q^{l s_i (lambda - |delta^c y|)(h_i)} delta^c(y)) v
        for &c in &self.labels {
            let t = beta.sub(&self.label_deg(c));
            let Some(tl) = self.levels.get(&t) else {
                continue;
            };
            let tindex: HashMap<&Word, usize> =
                tl.words.iter().enumerate().map(|(k, w)| (w, k)).collect();
            let tau = up.tau(c)?;
            let k = self.datum.k_power(c.i(), c.l());
            let e_top = self.lambda.eval(&k);
            let e_low = self.k_exponent(&t, &k);
            let mut imgs = Vec::new();
            for w in &words {
                let mut v = vec![Scalar::zero(); tl.dim()];
                for (x, cx) in up.delta_word(c, Side::Lower, w)? {
                    let k_ = tindex[&x];
                    v[k_] = &v[k_] + &(&(&tau * &cx) * &Scalar::q_pow(-e_top));
                }
                for (x, cx) in up.delta_word(c, Side::Upper, w)? {
                    let k_ = tindex[&x];
                    v[k_] = &v[k_] - &(&(&tau * &cx) * &Scalar::q_pow(e_low));
                }
                imgs.push(v);
            }
            self.raise.insert((c, beta.clone()), Arc::new(imgs));
        }
        self.levels.insert(
            beta.clone(),
            Level {
                beta: beta.clone(),
                words,
            },
        );
        Ok(())
    }

    fn raise_coords(&self, c: Label, beta: &RootVec, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        let t = beta.sub(&self.label_deg(c));
        let d = self.dim_at(&t);
        match self.raise.get(&(c, beta.clone())) {
            Some(map) => Ok(self.apply_map(map, coords, d)),
            None => Ok(vec![Scalar::zero(); d]),
        }
    }

    fn lower_coords(&self, c: Label, beta: &RootVec, coords: &[Scalar]) -> Result<Vec<Scalar>> {
        let t = beta.add(&self.label_deg(c));
        let d = self.dim_at(&t);
        match self.lower.get(&(c, beta.clone())) {
            Some(map) => Ok(self.apply_map(map, coords, d)),
            None => Ok(vec![Scalar::zero(); d]),
        }
    }

    /// The highest-weight vector `v_lambda`.
    pub fn top(&self) -> ModuleVec {
        ModuleVec::from_part(RootVec::zero(self.datum.rank()), vec![Scalar::one()])
    }

    /// The `k`-th basis vector of `M_{lambda - beta}`.
    pub fn basis_vec(&self, beta: &RootVec, k: usize) -> ModuleVec {
        ModuleVec::from_part(beta.clone(), Self::unit(self.dim_at(beta), k))
    }

    /// All basis vectors, ordered by depth.
    pub fn basis(&self) -> Vec<(RootVec, usize)> {
        self.levels
            .iter()
            .flat_map(|(b, l)| (0..l.dim()).map(move |k| (b.clone(), k)))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.levels.values().map(Level::dim).sum()
    }

    pub fn act_a(&self, c: Label, v: &ModuleVec) -> Result<ModuleVec> {
        let mut out = ModuleVec::zero();
        for (beta, coords) in v.parts() {
            let t = beta.sub(&self.label_deg(c));
            if !t.is_nonneg() {
                continue;
            }
            let img = self.raise_coords(c, beta, coords)?;
            out.add_part(&t, &img, &Scalar::one());
        }
        Ok(out)
    }

    pub fn act_b(&self, c: Label, v: &ModuleVec) -> Result<ModuleVec> {
        let mut out = ModuleVec::zero();
        for (beta, coords) in v.parts() {
            let t = beta.add(&self.label_deg(c));
            if t.height() as usize > self.depth {
                return Err(Error::Inconclusive {
                    what: format!(
                        "lowering by b_({}, {}) below the module depth",
                        self.datum.name(c.i()),
                        c.l()
                    ),
                    required: t.height() as usize,
                });
            }
            let img = self.lower_coords(c, beta, coords)?;
            out.add_part(&t, &img, &Scalar::one());
        }
        Ok(out)
    }

    /// `q^h v`.
    pub fn act_k(&self, h: &Coweight, v: &ModuleVec) -> ModuleVec {
        let mut out = ModuleVec::zero();
        for (beta, coords) in v.parts() {
            let e = self.k_exponent(beta, h);
            out.add_part(beta, coords, &Scalar::q_pow(e));
        }
        out
    }

    /// `B_i v`.
    pub fn act_big_b(&self, i: usize, v: &ModuleVec) -> Result<ModuleVec> {
        let c = self.ua.b_scale(i)?;
        Ok(self.act_b(Label::new(i, 1), v)?.scale(&c.inv()?))
    }

    /// `a_i^{(n)} v`.
    pub fn act_a_div(&self, i: usize, n: i64, v: &ModuleVec) -> Result<ModuleVec> {
        let mut w = v.clone();
        for _ in 0..n {
            if w.is_zero() {
                return Ok(w);
            }
            w = self.act_a(Label::new(i, 1), &w)?;
        }
        Ok(w.scale(&q_fact(n, self.datum.qi(i))?.inv()?))
    }

    /// `B_i^{(n)} v`.
    pub fn act_big_b_div(&self, i: usize, n: i64, v: &ModuleVec) -> Result<ModuleVec> {
        let mut w = v.clone();
        for _ in 0..n {
            if w.is_zero() {
                return Ok(w);
            }
            w = self.act_big_b(i, &w)?;
        }
        Ok(w.scale(&q_fact(n, self.datum.qi(i))?.inv()?))
    }

    /// Action of an arbitrary element in normal form.
    pub fn act(&self, u: &UElem, v: &ModuleVec) -> Result<ModuleVec> {
        let mut out = ModuleVec::zero();
        for (t, c) in u {
            let mut w = v.clone();
            for &lab in t.x.iter().rev() {
                if w.is_zero() {
                    break;
                }
                w = self.act_a(lab, &w)?;
            }
            if w.is_zero() {
                continue;
            }
            w = self.act_k(&t.h, &w);
            for &lab in t.y.iter().rev() {
                w = self.act_b(lab, &w)?;
            }
            out.add_scaled(&w, c);
        }
        Ok(out)
    }

    /// Least `N` with `a_i^N v = 0`.
    pub fn raise_nilpotency(&self, i: usize, v: &ModuleVec) -> Result<usize> {
        self.datum.require_real(i)?;
        let mut w = v.clone();
        let mut n = 0;
        while !w.is_zero() {
            w = self.act_a(Label::new(i, 1), &w)?;
            n += 1;
        }
        Ok(n)
    }

    /// Least `N` with `B_i^N v = 0`; inconclusive when the depth bound is reached first.
    pub fn lower_nilpotency(&self, i: usize, v: &ModuleVec) -> Result<usize> {
        self.datum.require_real(i)?;
        let mut w = v.clone();
        let mut n = 0;
        while !w.is_zero() {
            w = self.act_big_b(i, &w)?;
            n += 1;
        }
        Ok(n)
    }

    /// `(lambda - beta)(h_values)` and dimension for every nonzero weight space.
    pub fn character(&self) -> Vec<(Vec<i64>, usize)> {
        self.levels
            .iter()
            .map(|(b, l)| (self.weight_at(b).h_values, l.dim()))
            .collect()
    }

    /// Re-check that no nonzero vector below the top is killed by all raising
    /// generators: the stacked raising maps are injective on every level.
    pub fn verify_simple(&self) -> Result<bool> {
        for (beta, level) in &self.levels {
            if beta.height() == 0 {
                continue;
            }
            let mut rows: Matrix = Vec::new();
            for &c in &self.labels {
                if let Some(map) = self.raise.get(&(c, beta.clone())) {
                    let d = map.first().map_or(0, Vec::len);
                    for r in 0..d {
                        rows.push(map.iter().map(|img| img[r].clone()).collect());
                    }
                }
            }
            if rows.is_empty() || linalg::rank(&rows) != level.dim() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
