//! The subalgebras `U^+[i]`, the elements `f`, `f'`, `g`, `g'`, the mixed
//! derivations, the projections `P_i`, and invariance of the form under the
//! symmetries.

use std::collections::BTreeMap;

use serde_json::json;

use super::{
    clip, degrees_up_to, diff_p, diff_s, diff_u, label_param, name, other_labels, SuiteConfig,
};
use crate::cartan::{Label, RootVec};
use crate::engine::Engine;
use crate::error::Result;
use crate::freealg::Word;
use crate::lin::Lin;
use crate::linalg;
use crate::report::Check;
use crate::scalar::{q_binom, q_fact};
use crate::ualg::{FamilyKind, Involution, SymOp, UAlg, UElem, Variant};
use crate::uplus::{PElem, PTensor, Side, UPlus};
use crate::Scalar;

fn sign(k: i64) -> Scalar {
    Scalar::int(if k % 2 == 0 { 1 } else { -1 })
}

fn qp(k: i64) -> Scalar {
    Scalar::q_pow(k)
}

/// `(i, (j,l), l beta)` for every real `i` and label `(j,l)` with `j != i`
/// and `l beta` within the budget.
fn f_params(e: &Engine, cfg: &SuiteConfig) -> Vec<(usize, Label, i64)> {
    let d = e.datum();
    let mut out = Vec::new();
    for i in d.real_indices() {
        for jl in other_labels(d, i, cfg) {
            let lb = -d.a(i, jl.i()) * jl.l();
            if lb <= cfg.max_lbeta {
                out.push((i, jl, lb));
            }
        }
    }
    out
}

fn f_json(e: &Engine, i: usize, jl: Label) -> serde_json::Value {
    json!({"i": name(e.datum(), i), "jl": label_param(e.datum(), jl)})
}

fn with(mut v: serde_json::Value, key: &str, x: impl Into<serde_json::Value>) -> serde_json::Value {
    v[key] = x.into();
    v
}

fn ptensor(x: &PElem, y: &PElem) -> PTensor {
    let mut out = Lin::zero();
    for (a, ca) in x {
        for (b, cb) in y {
            out.add_term((a.clone(), b.clone()), ca * cb);
        }
    }
    out
}

fn diff_t(e: &Engine, lhs: &PTensor, rhs: &PTensor) -> Option<String> {
    let d = lhs.sub(rhs);
    (!d.is_zero()).then(|| {
        let terms: Vec<String> = d
            .iter()
            .take(6)
            .map(|((a, b), c)| {
                format!(
                    "({c}) {} (x) {}",
                    crate::freealg::render_word(e.datum(), a, "a"),
                    crate::freealg::render_word(e.datum(), b, "a")
                )
            })
            .collect();
        clip(format!(
            "lhs - rhs has {} terms: {}",
            d.len(),
            terms.join(" + ")
        ))
    })
}

fn ai(i: usize) -> Label {
    Label::new(i, 1)
}

fn lpp(i: usize) -> SymOp {
    SymOp {
        variant: Variant::Lpp,
        i,
        e: 1,
    }
}

fn lp_inv(i: usize) -> SymOp {
    SymOp {
        variant: Variant::Lp,
        i,
        e: -1,
    }
}

/// Apply a symmetry to a positive element and require a positive image.
fn sym_pos(ua: &UAlg, op: SymOp, x: &PElem) -> Result<std::result::Result<PElem, String>> {
    let img = ua.symmetry(op, &ua.from_pos(x))?;
    Ok(ua
        .pos_part(&img)
        .ok_or_else(|| clip(format!("image is not in U^+: {}", ua.render(&img)))))
}

/// `(1 - q_i^{2m - 2 l beta - 2}) q_i^{m-1}`-type products used by the `f` formulas.
fn falling(qi: i64, m: i64, lb: i64, top: i64) -> Scalar {
    let mut c = Scalar::one();
    for h in 0..top {
        c = &c * &(&Scalar::one() - &qp(qi * (2 * m - 2 * h - 2 * lb - 2)));
    }
    c
}

pub(super) fn f_coproduct(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        let qi = d.qi(i);
        for m in 0..=lb {
            out.push(Check::run(
                "f-coproduct",
                with(f_json(e, i, jl), "m", m),
                || {
                    for primed in [false, true] {
                        let f = up.f_elem(i, jl, m, primed)?;
                        let lhs = up.rho(&f)?;
                        let one = up.one();
                        let mut rhs = if primed {
                            ptensor(&f, &one)
                        } else {
                            ptensor(&one, &f)
                        };
                        for t in 0..=m {
                            let c = &falling(qi, m, lb, m - t) * &qp(qi * t * (m - t));
                            let ft = up.f_elem(i, jl, t, primed)?;
                            let a = up.divided_power(i, m - t)?;
                            let term = if primed {
                                ptensor(&a, &ft)
                            } else {
                                ptensor(&ft, &a)
                            };
                            rhs.add_scaled(&term, &c);
                        }
                        if let Some(why) = diff_t(e, &lhs, &rhs) {
                            return Ok(Some(format!("{}: {why}", if primed { "f'" } else { "f" })));
                        }
                    }
                    Ok(None)
                },
            )?);
        }
    }
    Ok(out)
}

pub(super) fn f_derivations(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        let qi = d.qi(i);
        for m in 0..=lb {
            out.push(Check::run(
                "f-derivations",
                with(f_json(e, i, jl), "m", m),
                || {
                    let step =
                        &(&Scalar::one() - &qp(qi * (2 * m - 2 * lb - 2))) * &qp(qi * (m - 1));
                    let mut outer = Scalar::one();
                    for h in 1..=m {
                        outer = &outer * &(&Scalar::one() - &qp(-2 * qi * (lb + 1 - h)));
                    }
                    let apow = up.divided_power(i, m)?;
                    for primed in [false, true] {
                        let f = up.f_elem(i, jl, m, primed)?;
                        let prev = if m == 0 {
                            Lin::zero()
                        } else {
                            up.f_elem(i, jl, m - 1, primed)?.scale(&step)
                        };
                        let (kill, lower) = if primed {
                            (Side::Lower, Side::Upper)
                        } else {
                            (Side::Upper, Side::Lower)
                        };
                        let cases = [
                            (
                                "delta_i on the killing side",
                                up.delta(ai(i), kill, &f)?,
                                Lin::zero(),
                            ),
                            (
                                "delta_i on the other side",
                                up.delta(ai(i), lower, &f)?,
                                prev,
                            ),
                            ("delta_jl", up.delta(jl, kill, &f)?, apow.scale(&outer)),
                        ];
                        for (what, lhs, rhs) in cases {
                            if let Some(why) = diff_p(d, &lhs, &rhs) {
                                return Ok(Some(format!(
                                    "{}, {what}: {why}",
                                    if primed { "f'" } else { "f" }
                                )));
                            }
                        }
                    }
                    Ok(None)
                },
            )?);
        }
    }
    Ok(out)
}

/// Basis words of every degree of height in `lo..=hi`.
fn basis_words(up: &UPlus, lo: usize, hi: usize) -> Result<Vec<(RootVec, Word)>> {
    let mut out = Vec::new();
    for beta in degrees_up_to(up.datum().rank(), hi) {
        if (beta.height() as usize) < lo {
            continue;
        }
        for w in up.basis_of_degree(&beta)? {
            out.push((beta.clone(), w));
        }
    }
    Ok(out)
}

pub(super) fn divided_derivation_power(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let words = basis_words(up, 1, cfg.max_height.min(5))?;
    let mut out = Vec::new();
    for i in d.real_indices() {
        let qi = d.qi(i);
        for n in 1..=cfg.max_param {
            for side in [Side::Lower, Side::Upper] {
                let sname = if side == Side::Lower {
                    "lower"
                } else {
                    "upper"
                };
                let params = json!({"i": name(d, i), "n": n, "side": sname});
                out.push(Check::run("divided-derivation-power", params, || {
                    for (beta, w) in &words {
                        if beta.get(i) < n {
                            continue;
                        }
                        let x = up.word(w)?;
                        let mut lhs = x.clone();
                        for _ in 0..n {
                            lhs = up.delta(ai(i), side, &lhs)?;
                        }
                        let rhs = up.delta_n(i, n, side, &x)?.scale(&qp(qi * n * (n - 1) / 2));
                        if let Some(why) = diff_p(d, &lhs, &rhs) {
                            return Ok(Some(format!(
                                "on {}: {why}",
                                crate::freealg::render_word(d, w, "a")
                            )));
                        }
                    }
                    Ok(None)
                })?);
            }
        }
    }
    Ok(out)
}

pub(super) fn kernel_decomposition(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let mut out = Vec::new();
    for i in d.real_indices() {
        // x = sum_t a_i^t k_t with k_t in ker delta^i, and x = sum_t k_t a_i^t with k_t in ker delta_i.
        for side in [Side::Upper, Side::Lower] {
            let sname = if side == Side::Upper {
                "a_i^t ker delta^i"
            } else {
                "ker delta_i a_i^t"
            };
            for beta in degrees_up_to(d.rank(), cfg.max_height) {
                let params = json!({"i": name(d, i), "decomposition": sname, "degree": beta.0});
                out.push(Check::run("kernel-decomposition", params, || {
                    let basis = up.basis_of_degree(&beta)?;
                    let mut vectors: Vec<PElem> = Vec::new();
                    for t in 0..=beta.get(i) {
                        let rest = beta.add_simple(i, -t);
                        let power = up.word(&vec![ai(i); t as usize])?;
                        let ker = if rest.is_zero() {
                            vec![up.one()]
                        } else {
                            up.kernel_basis(i, side, &rest)?
                        };
                        for k in ker {
                            vectors.push(match side {
                                Side::Upper => up.mul(&power, &k)?,
                                Side::Lower => up.mul(&k, &power)?,
                            });
                        }
                    }
                    let m: linalg::Matrix = vectors.iter().map(|v| up.coords(v, &basis)).collect();
                    let r = linalg::rank(&m);
                    Ok((r != basis.len() || vectors.len() != basis.len()).then(|| {
                        format!(
                            "dim {} but {} summand vectors of rank {r}",
                            basis.len(),
                            vectors.len()
                        )
                    }))
                })?);
            }
        }
    }
    Ok(out)
}

/// Nullity of the non-positive part of `L` on the basis of one degree.
fn positive_preimage_dim(ua: &UAlg, op: SymOp, basis: &[Word]) -> Result<usize> {
    let images: Vec<UElem> = basis
        .iter()
        .map(|w| ua.symmetry(op, &ua.from_pos(&Lin::basis(w.clone()))))
        .collect::<Result<_>>()?;
    let mut keys = std::collections::BTreeSet::new();
    for img in &images {
        for (t, _) in img {
            if !t.y.is_empty() || !t.h.is_zero() {
                keys.insert(t.clone());
            }
        }
    }
    let m: linalg::Matrix = keys
        .iter()
        .map(|k| images.iter().map(|img| img.coeff(k)).collect())
        .collect();
    Ok(basis.len() - if m.is_empty() { 0 } else { linalg::rank(&m) })
}

pub(super) fn kernel_characterization(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, up, d) = (e.ualg(), e.uplus(), e.datum());
    let mut out = Vec::new();
    for i in d.real_indices() {
        for (side, op) in [(Side::Upper, lpp(i)), (Side::Lower, lp_inv(i))] {
            let sname = if side == Side::Upper {
                "upper"
            } else {
                "lower"
            };
            for beta in degrees_up_to(d.rank(), cfg.max_height.min(4)) {
                let params = json!({"i": name(d, i), "side": sname, "degree": beta.0});
                out.push(Check::run(
                    "kernel-symmetry-characterization",
                    params,
                    || {
                        let ker = up.kernel_basis(i, side, &beta)?;
                        for k in &ker {
                            if let Err(why) = sym_pos(ua, op, k)? {
                                return Ok(Some(format!("kernel vector: {why}")));
                            }
                        }
                        let pre = positive_preimage_dim(ua, op, &up.basis_of_degree(&beta)?)?;
                        Ok((pre != ker.len()).then(|| {
                            format!(
                                "kernel has dim {}, positive preimage has dim {pre}",
                                ker.len()
                            )
                        }))
                    },
                )?);
            }
        }
    }
    Ok(out)
}

pub(super) fn f_exchange(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ua = e.ualg();
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        for m in 0..=lb {
            out.push(Check::run(
                "f-symmetry-exchange",
                with(f_json(e, i, jl), "m", m),
                || {
                    let cases = [
                        (lpp(i), FamilyKind::F, FamilyKind::Fp),
                        (lpp(i), FamilyKind::G, FamilyKind::Gp),
                        (lp_inv(i), FamilyKind::Fp, FamilyKind::F),
                        (lp_inv(i), FamilyKind::Gp, FamilyKind::G),
                    ];
                    for (op, from, to) in cases {
                        let lhs = ua.symmetry(op, &ua.f_family(from, i, jl, m)?)?;
                        let rhs = ua.f_family(to, i, jl, lb - m)?;
                        if let Some(why) = diff_u(ua, &lhs, &rhs) {
                            return Ok(Some(format!("{from:?} -> {to:?}: {why}")));
                        }
                    }
                    Ok(None)
                },
            )?);
        }
    }
    Ok(out)
}

pub(super) fn varpi_mirror(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        let qi = d.qi(i);
        for m in 0..=lb {
            out.push(Check::run(
                "varpi-f-mirror",
                with(f_json(e, i, jl), "m", m),
                || {
                    let c = &sign(m) * &qp(qi * m * (-lb + m - 1));
                    for (from, to) in [
                        (FamilyKind::F, FamilyKind::G),
                        (FamilyKind::Fp, FamilyKind::Gp),
                    ] {
                        let lhs =
                            ua.involution(Involution::VarpiAt(i), &ua.f_family(from, i, jl, m)?)?;
                        let rhs = ua.f_family(to, i, jl, m)?.scale(&c);
                        if let Some(why) = diff_u(ua, &lhs, &rhs) {
                            return Ok(Some(format!("{from:?}: {why}")));
                        }
                    }
                    Ok(None)
                },
            )?);
        }
    }
    Ok(out)
}

pub(super) fn f_pairing(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        for m in 0..=lb {
            out.push(Check::run(
                "f-pairing-closed-form",
                with(f_json(e, i, jl), "m", m),
                || {
                    let rhs = &ua.uplus().tau(jl)? * &q_binom(lb, m, d.qi(i))?;
                    for (g, f) in [
                        (FamilyKind::G, FamilyKind::F),
                        (FamilyKind::Gp, FamilyKind::Fp),
                    ] {
                        let lhs =
                            ua.form_pm(&ua.f_family(g, i, jl, m)?, &ua.f_family(f, i, jl, m)?)?;
                        if let Some(why) = diff_s(&lhs, &rhs) {
                            return Ok(Some(format!("{{{g:?}, {f:?}}}: {why}")));
                        }
                    }
                    Ok(None)
                },
            )?);
        }
    }
    Ok(out)
}

pub(super) fn divided_power_pairing(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for i in d.real_indices() {
        let qi = d.qi(i);
        for m in 1..=4 {
            out.push(Check::run(
                "divided-power-pairing",
                json!({"i": name(d, i), "m": m}),
                || {
                    let lhs = ua.form_pm(&ua.big_b_div(i, m)?, &ua.a_div(i, m)?)?;
                    let base = (&qp(-qi) - &qp(qi)).pow(-m);
                    let rhs = &(&qp(qi * m * (m - 1) / 2) * &base) * &q_fact(m, qi)?.inv()?;
                    Ok(diff_s(&lhs, &rhs))
                },
            )?);
        }
    }
    Ok(out)
}

pub(super) fn pairing_invariance(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ua = e.ualg();
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        for m in 0..=lb {
            out.push(Check::run(
                "f-pairing-invariance",
                with(f_json(e, i, jl), "m", m),
                || {
                    let f = ua.f_family(FamilyKind::F, i, jl, m)?;
                    let g = ua.f_family(FamilyKind::G, i, jl, m)?;
                    let (lf, lg) = (ua.symmetry(lpp(i), &f)?, ua.symmetry(lpp(i), &g)?);
                    if !ua.is_positive(&lf) || !ua.is_negative(&lg) {
                        return Ok(Some("images leave U^+ x U^-".into()));
                    }
                    Ok(diff_s(&ua.form_pm(&lg, &lf)?, &ua.form_pm(&g, &f)?))
                },
            )?);
        }
    }
    Ok(out)
}

pub(super) fn mixed_pairing(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, up, d) = (e.ualg(), e.uplus(), e.datum());
    let ys = basis_words(up, 1, 2)?;
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        for m in 0..=lb {
            out.push(Check::run(
                "mixed-derivation-pairing",
                with(f_json(e, i, jl), "m", m),
                || {
                    for (g_kind, f_kind, r, s) in [
                        (FamilyKind::G, FamilyKind::F, 0, m),
                        (FamilyKind::Gp, FamilyKind::Fp, m, 0),
                    ] {
                        let g = ua.f_family(g_kind, i, jl, m)?;
                        let c = ua.form_pm(&g, &ua.f_family(f_kind, i, jl, m)?)?;
                        let deg_g = d.label_root(jl).add_simple(i, m);
                        let mut cases: Vec<(RootVec, Word)> =
                            vec![(RootVec::zero(d.rank()), Vec::new())];
                        cases.extend(ys.iter().cloned());
                        for (dy, yw) in &cases {
                            let y = Lin::basis(yw.clone());
                            let gy = ua.mul(&g, &ua.from_neg(&y))?;
                            for xw in up.basis_of_degree(&deg_g.add(dy))? {
                                let x = up.word(&xw)?;
                                let lhs = ua.form_pm(&gy, &ua.from_pos(&x))?;
                                let rhs = &c * &up.form(&y, &up.delta_mixed(i, jl, r, s, &x)?)?;
                                if lhs != rhs {
                                    return Ok(Some(format!(
                                        "{g_kind:?}, y = {}, x = {}: lhs = {lhs}, rhs = {rhs}",
                                        crate::freealg::render_word(d, yw, "b"),
                                        crate::freealg::render_word(d, &xw, "a")
                                    )));
                                }
                            }
                        }
                    }
                    Ok(None)
                },
            )?);
        }
    }
    Ok(out)
}

/// Pairs of basis words `(x, x')` with positive heights summing to at most
/// `h`, whose product degree dominates `target`.
fn word_pairs(up: &UPlus, h: usize, target: &RootVec) -> Result<Vec<(RootVec, Word, Word)>> {
    let words = basis_words(up, 1, h.saturating_sub(1))?;
    let mut out = Vec::new();
    for (b1, x) in &words {
        for (b2, y) in &words {
            let tot = b1.add(b2);
            if tot.height() as usize <= h && tot.sub(target).is_nonneg() {
                out.push((b1.clone(), x.clone(), y.clone()));
            }
        }
    }
    Ok(out)
}

/// `delta^{(j,l);ni}` (`left_a = false`) or `delta^{ni;(j,l)}` (`left_a = true`).
fn mixed(up: &UPlus, i: usize, jl: Label, n: i64, left_a: bool, x: &PElem) -> Result<PElem> {
    if left_a {
        up.delta_mixed(i, jl, n, 0, x)
    } else {
        up.delta_mixed(i, jl, 0, n, x)
    }
}

/// Right-hand side of the product rule for the mixed derivations; with
/// `two_terms` only the two leading terms are kept.
fn product_rule_rhs(
    up: &UPlus,
    i: usize,
    jl: Label,
    n: i64,
    left_a: bool,
    mu: &RootVec,
    x: &PElem,
    y: &PElem,
    two_terms: bool,
) -> Result<PElem> {
    let d = up.datum();
    let qi = d.qi(i);
    let lj = d.label_root(jl);
    let span = lj.add_simple(i, n);
    let mut rhs = up.mul(&mixed(up, i, jl, n, left_a, x)?, y)?;
    rhs.add_scaled(
        &up.mul(x, &mixed(up, i, jl, n, left_a, y)?)?,
        &qp(d.root_pairing(mu, &span)),
    );
    if two_terms {
        return Ok(rhs);
    }
    let rank = d.rank();
    for t in 0..n {
        let c = q_binom(n, t, qi)?;
        let (ex, term) = if left_a {
            let ex = d.root_pairing(&mu.add_simple(i, -(n - t)), &lj.add_simple(i, t));
            let term = up.mul(
                &up.delta_n(i, n - t, Side::Upper, x)?,
                &mixed(up, i, jl, t, true, y)?,
            )?;
            (ex, term)
        } else {
            let ex = d.root_pairing(
                &mu.sub(&lj).add_simple(i, -t),
                &RootVec::simple(rank, i, n - t),
            );
            let term = up.mul(
                &mixed(up, i, jl, t, false, x)?,
                &up.delta_n(i, n - t, Side::Upper, y)?,
            )?;
            (ex, term)
        };
        rhs.add_scaled(&term, &(&c * &qp(ex)));
    }
    Ok(rhs)
}

pub(super) fn mixed_product_rule(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let h = cfg.max_height.min(5);
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        for n in 0..=lb.min(cfg.max_param) {
            for left_a in [false, true] {
                let order = if left_a {
                    "a_i^(n) a_jl"
                } else {
                    "a_jl a_i^(n)"
                };
                let params = with(with(f_json(e, i, jl), "n", n), "left_factor", order);
                out.push(Check::run("mixed-derivation-product-rule", params, || {
                    let target = d.label_root(jl).add_simple(i, n);
                    for (mu, xw, yw) in word_pairs(up, h, &target)? {
                        let (x, y) = (up.word(&xw)?, up.word(&yw)?);
                        let lhs = mixed(up, i, jl, n, left_a, &up.mul(&x, &y)?)?;
                        let rhs = product_rule_rhs(up, i, jl, n, left_a, &mu, &x, &y, false)?;
                        if let Some(why) = diff_p(d, &lhs, &rhs) {
                            return Ok(Some(format!(
                                "x = {}, x' = {}: {why}",
                                crate::freealg::render_word(d, &xw, "a"),
                                crate::freealg::render_word(d, &yw, "a")
                            )));
                        }
                    }
                    Ok(None)
                })?);
            }
        }
    }
    Ok(out)
}

pub(super) fn mixed_kernel_rule(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let h = cfg.max_height.min(5);
    let words = basis_words(up, 1, h - 1)?;
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        for n in 0..=lb.min(cfg.max_param) {
            for left_a in [false, true] {
                let order = if left_a {
                    "a_i^(n) a_jl"
                } else {
                    "a_jl a_i^(n)"
                };
                let params = with(with(f_json(e, i, jl), "n", n), "left_factor", order);
                out.push(Check::run(
                    "mixed-derivation-kernel-product-rule",
                    params,
                    || {
                        let target = d.label_root(jl).add_simple(i, n);
                        for (b1, xw) in &words {
                            for b2 in degrees_up_to(d.rank(), h - b1.height() as usize) {
                                if !b1.add(&b2).sub(&target).is_nonneg() {
                                    continue;
                                }
                                let plain = up.word(xw)?;
                                for k in up.kernel_basis(i, Side::Upper, &b2)? {
                                    // The kernel element sits on the side whose extra terms it kills.
                                    let (x, y, mu) = if left_a {
                                        (&k, &plain, &b2)
                                    } else {
                                        (&plain, &k, b1)
                                    };
                                    let lhs = mixed(up, i, jl, n, left_a, &up.mul(x, y)?)?;
                                    let rhs =
                                        product_rule_rhs(up, i, jl, n, left_a, mu, x, y, true)?;
                                    if let Some(why) = diff_p(d, &lhs, &rhs) {
                                        return Ok(Some(format!(
                                            "word {}: {why}",
                                            crate::freealg::render_word(d, xw, "a")
                                        )));
                                    }
                                }
                            }
                        }
                        Ok(None)
                    },
                )?);
            }
        }
    }
    Ok(out)
}

pub(super) fn mixed_of_f(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let mut out = Vec::new();
    for (i, jl, lb) in f_params(e, cfg) {
        let qi = d.qi(i);
        for m in 0..=lb {
            for n in 0..=lb {
                let params = with(with(f_json(e, i, jl), "m", m), "n", n);
                out.push(Check::run("mixed-derivation-of-f", params, || {
                    let f = up.f_elem(i, jl, m, false)?;
                    let rhs = if n <= m {
                        let gamma = &falling(qi, m, lb, m - n) * &qp(qi * n * (m - n));
                        up.divided_power(i, m - n)?.scale(&gamma)
                    } else {
                        Lin::zero()
                    };
                    if let Some(why) = diff_p(d, &up.delta_mixed(i, jl, 0, n, &f)?, &rhs) {
                        return Ok(Some(format!("f: {why}")));
                    }
                    let fp = up.f_elem(i, jl, m, true)?;
                    let rhs = if n == m { up.one() } else { Lin::zero() };
                    Ok(diff_p(d, &up.delta_mixed(i, jl, n, 0, &fp)?, &rhs)
                        .map(|why| format!("f': {why}")))
                })?);
            }
        }
    }
    Ok(out)
}

pub(super) fn projection_product_rule(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (up, d) = (e.uplus(), e.datum());
    let h = cfg.max_height.min(4);
    let mut out = Vec::new();
    for i in d.real_indices() {
        let pairs = word_pairs(up, h, &RootVec::zero(d.rank()))?;
        out.push(Check::run(
            "projection-product-rule",
            json!({"i": name(d, i), "max_height": h}),
            || {
                for (_, xw, yw) in &pairs {
                    let (x, y) = (up.word(xw)?, up.word(yw)?);
                    let lhs = up.project(i, Side::Upper, &up.mul(&x, &y)?)?;
                    let rhs = up.project(
                        i,
                        Side::Upper,
                        &up.mul(&up.project(i, Side::Upper, &x)?, &y)?,
                    )?;
                    if let Some(why) = diff_p(d, &lhs, &rhs) {
                        return Ok(Some(format!(
                            "x = {}, x' = {}: {why}",
                            crate::freealg::render_word(d, xw, "a"),
                            crate::freealg::render_word(d, yw, "a")
                        )));
                    }
                }
                Ok(None)
            },
        )?);
    }
    Ok(out)
}

/// Products of at most two `f` (or `g`) elements for a fixed `i`, each tagged
/// with a description and its degree, with height at most `h`.
fn f_products(
    e: &Engine,
    cfg: &SuiteConfig,
    i: usize,
    h: usize,
) -> Result<Vec<(String, RootVec, PElem)>> {
    let (up, d) = (e.uplus(), e.datum());
    let mut singles = Vec::new();
    for (i2, jl, lb) in f_params(e, cfg) {
        if i2 != i {
            continue;
        }
        for m in 0..=lb {
            let deg = d.label_root(jl).add_simple(i, m);
            if deg.height() as usize <= h {
                let tag = format!("f({},{},{m})", d.name(jl.i()), jl.l);
                singles.push((tag, deg, up.f_elem(i, jl, m, false)?));
            }
        }
    }
    let mut out = singles.clone();
    for (t1, d1, x1) in &singles {
        for (t2, d2, x2) in &singles {
            let deg = d1.add(d2);
            if deg.height() as usize <= h {
                out.push((format!("{t1} {t2}"), deg, up.mul(x1, x2)?));
            }
        }
    }
    Ok(out)
}

/// The negative mirrors of [`f_products`]: the same products of `g` elements.
fn g_products(
    e: &Engine,
    cfg: &SuiteConfig,
    i: usize,
    h: usize,
) -> Result<Vec<(String, RootVec, UElem)>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut singles = Vec::new();
    for (i2, jl, lb) in f_params(e, cfg) {
        if i2 != i {
            continue;
        }
        for m in 0..=lb {
            let deg = d.label_root(jl).add_simple(i, m);
            if deg.height() as usize <= h {
                let tag = format!("g({},{},{m})", d.name(jl.i()), jl.l);
                singles.push((tag, deg, ua.f_family(FamilyKind::G, i, jl, m)?));
            }
        }
    }
    let mut out = singles.clone();
    for (t1, d1, y1) in &singles {
        for (t2, d2, y2) in &singles {
            let deg = d1.add(d2);
            if deg.height() as usize <= h {
                out.push((format!("{t1} {t2}"), deg, ua.mul(y1, y2)?));
            }
        }
    }
    Ok(out)
}

pub(super) fn projection_power(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, up, d) = (e.ualg(), e.uplus(), e.datum());
    let h = up.window();
    let mut out = Vec::new();
    for i in d.real_indices() {
        let qi = d.qi(i);
        let xs = f_products(e, cfg, i, cfg.max_height)?;
        for n in 1..=cfg.max_param {
            out.push(Check::run(
                "projection-of-power-product",
                json!({"i": name(d, i), "n": n}),
                || {
                    let scale_den = (&qp(qi) - &qp(-qi)).pow(-n);
                    for (tag, mu, x) in &xs {
                        if mu.height() as usize + n as usize > h {
                            continue;
                        }
                        let lhs = up.project(
                            i,
                            Side::Upper,
                            &up.mul(x, &up.word(&vec![ai(i); n as usize])?)?,
                        )?;
                        let mut z = match sym_pos(ua, lpp(i), x)? {
                            Ok(z) => z,
                            Err(why) => return Ok(Some(format!("L'' of {tag}: {why}"))),
                        };
                        for _ in 0..n {
                            z = up.delta(ai(i), Side::Upper, &z)?;
                        }
                        let back = match sym_pos(ua, lp_inv(i), &z)? {
                            Ok(b) => b,
                            Err(why) => return Ok(Some(format!("L' on {tag}: {why}"))),
                        };
                        let c = &(&qp(n * d.root_pairing(mu, &RootVec::simple(d.rank(), i, 1)))
                            * &qp(qi * n * (n + 1)))
                            * &scale_den;
                        if let Some(why) = diff_p(d, &lhs, &back.scale(&c)) {
                            return Ok(Some(format!("x = {tag}: {why}")));
                        }
                    }
                    Ok(None)
                },
            )?);
        }
    }
    Ok(out)
}

pub(super) fn form_invariance(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let h = cfg.max_height.min(e.uplus().window());
    let mut out = Vec::new();
    for i in d.real_indices() {
        out.push(Check::run(
            "symmetry-form-invariance",
            json!({"i": name(d, i), "max_height": h}),
            || {
                let xs = f_products(e, cfg, i, h)?;
                let ys = g_products(e, cfg, i, h)?;
                let mut images: BTreeMap<usize, UElem> = BTreeMap::new();
                for (k, (tag, _, x)) in xs.iter().enumerate() {
                    let img = ua.symmetry(lpp(i), &ua.from_pos(x))?;
                    if !ua.is_positive(&img) {
                        return Ok(Some(format!("L'' of {tag} leaves U^+")));
                    }
                    images.insert(k, img);
                }
                for (ty, dy, y) in &ys {
                    let ly = ua.symmetry(lpp(i), y)?;
                    if !ua.is_negative(&ly) {
                        return Ok(Some(format!("L'' of {ty} leaves U^-")));
                    }
                    for (k, (tx, dx, x)) in xs.iter().enumerate() {
                        if dx != dy {
                            continue;
                        }
                        let lhs = ua.form_pm(&ly, &images[&k])?;
                        let rhs = ua.form_pm(y, &ua.from_pos(x))?;
                        if lhs != rhs {
                            return Ok(Some(format!(
                                "{{{ty}, {tx}}}: after = {lhs}, before = {rhs}"
                            )));
                        }
                    }
                }
                Ok(None)
            },
        )?);
    }
    Ok(out)
}

fn group_by_right(t: &PTensor) -> BTreeMap<Word, PElem> {
    let mut out: BTreeMap<Word, PElem> = BTreeMap::new();
    for ((a, b), c) in t {
        out.entry(b.clone())
            .or_default()
            .add_term(a.clone(), c.clone());
    }
    out
}

fn group_by_left(t: &PTensor) -> BTreeMap<Word, PElem> {
    let mut out: BTreeMap<Word, PElem> = BTreeMap::new();
    for ((a, b), c) in t {
        out.entry(a.clone())
            .or_default()
            .add_term(b.clone(), c.clone());
    }
    out
}

fn from_right_groups(groups: &BTreeMap<Word, PElem>) -> PTensor {
    let mut out = Lin::zero();
    for (b, left) in groups {
        for (a, c) in left {
            out.add_term((a.clone(), b.clone()), c.clone());
        }
    }
    out
}

pub(super) fn coproduct_projection(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, up, d) = (e.ualg(), e.uplus(), e.datum());
    let h = cfg.max_height.min(5);
    let mut out = Vec::new();
    for i in d.real_indices() {
        let xs = f_products(e, cfg, i, h)?;
        for (tag, _, x) in xs {
            out.push(Check::run(
                "symmetry-coproduct-projection",
                json!({"i": name(d, i), "x": tag}),
                || {
                    // (P'_i (x) id) rho L''(x)
                    let lx = match sym_pos(ua, lpp(i), &x)? {
                        Ok(v) => v,
                        Err(why) => return Ok(Some(format!("L''(x): {why}"))),
                    };
                    let mut lhs_groups = BTreeMap::new();
                    for (b, left) in group_by_right(&up.rho(&lx)?) {
                        lhs_groups.insert(b, up.project(i, Side::Lower, &left)?);
                    }
                    let lhs = from_right_groups(&lhs_groups);
                    // (L'' (x) L'')(id (x) P_i) rho(x)
                    let mut mid: PTensor = Lin::zero();
                    for (a, right) in group_by_left(&up.rho(&x)?) {
                        let p = up.project(i, Side::Upper, &right)?;
                        let lp = match sym_pos(ua, lpp(i), &p)? {
                            Ok(v) => v,
                            Err(why) => return Ok(Some(format!("L''(P_i(.)): {why}"))),
                        };
                        mid.add_scaled(&ptensor(&Lin::basis(a), &lp), &Scalar::one());
                    }
                    let mut rhs_groups = BTreeMap::new();
                    for (b, left) in group_by_right(&mid) {
                        match sym_pos(ua, lpp(i), &left)? {
                            Ok(v) => {
                                rhs_groups.insert(b, v);
                            }
                            Err(why) => return Ok(Some(format!("left factor leaves U^+: {why}"))),
                        }
                    }
                    let rhs = from_right_groups(&rhs_groups);
                    Ok(diff_t(e, &lhs, &rhs))
                },
            )?);
        }
    }
    Ok(out)
}
