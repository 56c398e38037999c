//! The free algebra, its form, the primitive generators and the defining
//! relations of `U`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{clip, diff_u, label_param, name, small_labels, SuiteConfig};
use crate::cartan::{Coweight, Label, Weight};
use crate::engine::Engine;
use crate::error::Result;
use crate::freealg::{self, FreeElem, TensorElem, Word};
use crate::lin::Lin;
use crate::linalg;
use crate::primitive::{compositions, partitions};
use crate::report::Check;
use crate::ualg::Involution;
use crate::uplus::Side;
use crate::Scalar;

/// Levels of the imaginary generators exercised by the primitive checks.
fn imaginary_levels(e: &Engine, top: i64) -> Vec<(usize, i64)> {
    let d = e.datum();
    let mut out = Vec::new();
    for i in d.imaginary_indices() {
        for l in 1..=top.min(d.max_l(i) as i64) {
            out.push((i, l));
        }
    }
    out
}

fn composition_word(i: usize, c: &[i64]) -> Word {
    c.iter().map(|&p| Label::new(i, p as usize)).collect()
}

pub(super) fn leading_term(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (i, l) in imaginary_levels(e, 3) {
        let params = json!({"i": name(d, i), "l": l});
        out.push(Check::run("primitive-leading-term", params, || {
            let p = e.prims().get(Label::new(i, l as usize))?;
            let top: Word = vec![Label::new(i, l as usize)];
            if !p.element.coeff(&top).is_one() {
                return Ok(Some(format!(
                    "coefficient of e_{{{},{l}}} is {}",
                    d.name(i),
                    p.element.coeff(&top)
                )));
            }
            let bad = p
                .element
                .keys()
                .find(|w| **w != top && w.iter().any(|lab| lab.i() != i || lab.l() >= l));
            Ok(bad.map(|w| format!("unexpected word {}", freealg::render_word(d, w, "e"))))
        })?);
    }
    Ok(out)
}

pub(super) fn orthogonality(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (i, l) in imaginary_levels(e, 4) {
        let params = json!({"i": name(d, i), "l": l});
        out.push(Check::run("primitive-orthogonality", params, || {
            let p = e.prims().get(Label::new(i, l as usize))?;
            for c in compositions(l).into_iter().filter(|c| c.len() > 1) {
                let v = e
                    .free()
                    .form(&p.element, &Lin::basis(composition_word(i, &c)));
                if !v.is_zero() {
                    return Ok(Some(format!("pairing with e_{c:?} is {v}")));
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

/// The monomials `a_{i,c}` indexing a spanning set of degree `l alpha_i`:
/// partitions for isotropic `i`, compositions otherwise.
fn spanning_index(e: &Engine, i: usize, l: i64) -> Vec<Vec<i64>> {
    let cap = e.datum().max_l(i) as i64;
    let all = if e.datum().a(i, i) == 0 {
        partitions(l)
    } else {
        compositions(l)
    };
    all.into_iter()
        .filter(|c| c.iter().all(|&p| p <= cap))
        .collect()
}

pub(super) fn spanning(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (i, l) in imaginary_levels(e, 4) {
        let params = json!({"i": name(d, i), "l": l});
        out.push(Check::run("primitive-spanning", params, || {
            let elems: Vec<FreeElem> = spanning_index(e, i, l)
                .iter()
                .map(|c| e.prims().composition_product(i, c))
                .collect::<Result<_>>()?;
            let g: linalg::Matrix = elems
                .iter()
                .map(|x| elems.iter().map(|y| e.free().form(x, y)).collect())
                .collect();
            let got = linalg::rank(&g);
            let full = e
                .free()
                .gram(&crate::cartan::RootVec::simple(d.rank(), i, l))?
                .rank;
            Ok((got != full).then(|| {
                format!("Gram rank of the primitive monomials is {got}, full rank is {full}")
            }))
        })?);
    }
    Ok(out)
}

pub(super) fn primitive_coproduct(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (i, l) in imaginary_levels(e, 3) {
        let params = json!({"i": name(d, i), "l": l});
        out.push(Check::run("primitive-coproduct", params, || {
            let a = &e.prims().get(Label::new(i, l as usize))?.element;
            let mut rest = freealg::coproduct(d, a);
            let mut prim: TensorElem = Lin::zero();
            for (w, c) in a {
                prim.add_term((w.clone(), Vec::new()), c.clone());
                prim.add_term((Vec::new(), w.clone()), c.clone());
            }
            rest = rest.sub(&prim);
            for k in 1..l {
                let left =
                    freealg::words_of_degree(d, &crate::cartan::RootVec::simple(d.rank(), i, k));
                let right = freealg::words_of_degree(
                    d,
                    &crate::cartan::RootVec::simple(d.rank(), i, l - k),
                );
                for u in &left {
                    for v in &right {
                        let probe = Lin::basis((u.clone(), v.clone()));
                        let val = e.free().tensor_form(&rest, &probe);
                        if !val.is_zero() {
                            return Ok(Some(format!(
                                "pairs to {val} with {} (x) {}",
                                freealg::render_word(d, u, "e"),
                                freealg::render_word(d, v, "e")
                            )));
                        }
                    }
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

/// Asserted when every `nu_{i,k}` is 1; for other `nu` a failure is
/// recorded as undecided, since bar invariance is then not expected.
pub(super) fn bar_invariance(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (i, l) in imaginary_levels(e, 4) {
        let params = json!({"i": name(d, i), "l": l});
        let p = e.prims().get(Label::new(i, l as usize))?;
        let unit_nu = (1..=l).all(|k| d.nu(Label::new(i, k as usize)).is_one());
        let bad = p.gammas.iter().find(|(_, g)| g.bar() != *g);
        let check = match (bad, unit_nu) {
            (None, _) => Check::holds("primitive-bar-invariance", params),
            (Some((c, g)), true) => Check::new(
                "primitive-bar-invariance",
                params,
                crate::report::Status::Fails,
                format!("coefficient of e_{c:?} is {g}"),
            ),
            (Some((c, g)), false) => Check::new(
                "primitive-bar-invariance",
                params,
                crate::report::Status::Inconclusive,
                format!("coefficient of e_{c:?} is {g}; not asserted for nu != 1"),
            ),
        };
        out.push(check);
    }
    Ok(out)
}

fn sorted_desc(c: &[i64]) -> Vec<i64> {
    let mut p = c.to_vec();
    p.sort_unstable_by(|a, b| b.cmp(a));
    p
}

fn capped_compositions(e: &Engine, i: usize, l: i64) -> Vec<Vec<i64>> {
    let cap = e.datum().max_l(i) as i64;
    compositions(l)
        .into_iter()
        .filter(|c| c.iter().all(|&p| p <= cap))
        .collect()
}

pub(super) fn partition_orthogonality(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (i, l) in imaginary_levels(e, 4) {
        if l < 2 {
            continue;
        }
        let params = json!({"i": name(d, i), "l": l});
        out.push(Check::run("partition-orthogonality", params, || {
            let comps = capped_compositions(e, i, l);
            let elems: Vec<FreeElem> = comps
                .iter()
                .map(|c| e.prims().composition_product(i, c))
                .collect::<Result<_>>()?;
            for (x, c) in elems.iter().zip(&comps) {
                for (y, c2) in elems.iter().zip(&comps) {
                    if sorted_desc(c) != sorted_desc(c2) {
                        let v = e.free().form(x, y);
                        if !v.is_zero() {
                            return Ok(Some(format!("{{a_{c:?}, a_{c2:?}}} = {v}")));
                        }
                    }
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

pub(super) fn reversal(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (i, l) in imaginary_levels(e, 4) {
        if l < 2 {
            continue;
        }
        let params = json!({"i": name(d, i), "l": l});
        out.push(Check::run("composition-reversal", params, || {
            let comps = capped_compositions(e, i, l);
            let qp = d.q_paren(i);
            for c in &comps {
                let x = e.prims().composition_product(i, c)?;
                for c2 in comps.iter().filter(|c2| sorted_desc(c2) == sorted_desc(c)) {
                    let y = e.prims().composition_product(i, c2)?;
                    let rev: Vec<i64> = c2.iter().rev().copied().collect();
                    let y_rev = e.prims().composition_product(i, &rev)?;
                    let tau = e.prims().composition_tau(i, c2)?;
                    let gamma = &e.free().form(&x, &y) * &tau.inv()?;
                    let mut m = 0;
                    for r in 0..c2.len() {
                        for s in r + 1..c2.len() {
                            m += 2 * c2[r] * c2[s];
                        }
                    }
                    let lhs = e.free().form(&x, &y_rev);
                    let rhs = &(&Scalar::q_pow(qp * m) * &gamma.bar()) * &tau;
                    if lhs != rhs {
                        return Ok(Some(format!(
                            "c = {c:?}, c' = {c2:?}: lhs = {lhs}, rhs = {rhs}"
                        )));
                    }
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

pub(super) fn serre_radical(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for i in d.real_indices() {
        for j in (0..d.rank()).filter(|&j| j != i) {
            let beta = -d.a(i, j);
            let mut middles: Vec<(i64, Vec<i64>)> = Vec::new();
            if d.is_real(j) {
                for n in 1..=cfg.max_param {
                    middles.push((n, Vec::new()));
                }
            } else {
                for n in 1..=cfg.max_level.min(d.max_l(j) as i64) {
                    for c in capped_compositions(e, j, n) {
                        middles.push((n, c));
                    }
                }
            }
            for (n, comp) in middles {
                let mut m = beta * n + 1;
                while (n + m) as usize <= cfg.max_height {
                    for sign in [1, -1] {
                        let params = json!({"i": name(d, i), "j": name(d, j), "n": n, "m": m,
                                            "composition": comp, "sign": sign});
                        out.push(Check::run("serre-radical", params, || {
                            let x = e.free().serre_element(i, j, n, m, &comp, sign)?;
                            Ok((!e.free().radical_member(&x)?)
                                .then(|| "pairs nontrivially with a monomial".to_string()))
                        })?);
                    }
                    m += 1;
                }
            }
        }
    }
    Ok(out)
}

/// The radical of the form is a two-sided ideal: a basis of the radical in
/// each degree, multiplied on either side by a generator, stays radical.
pub(super) fn radical_ideal(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let fa = e.free();
    let gens = small_labels(d, cfg);
    let mut out = Vec::new();
    for beta in super::degrees_up_to(d.rank(), cfg.max_height.saturating_sub(1)) {
        let params = json!({"degree": beta.0});
        out.push(Check::run("radical-ideal", params, || {
            let g = fa.gram(&beta)?;
            let radical: Vec<FreeElem> = linalg::kernel(&g.matrix, g.basis.len())
                .into_iter()
                .map(|v| {
                    let mut x = FreeElem::zero();
                    for (w, c) in g.basis.iter().zip(&v) {
                        x.add_scaled(&Lin::basis(w.clone()), c);
                    }
                    x
                })
                .collect();
            for lab in &gens {
                if beta.height() + lab.l() > cfg.max_height as i64 {
                    continue;
                }
                let y = freealg::generator(*lab);
                for (k, x) in radical.iter().enumerate() {
                    for (side, p) in [
                        ("left", freealg::multiply(&y, x)),
                        ("right", freealg::multiply(x, &y)),
                    ] {
                        if !fa.radical_member(&p)? {
                            return Ok(Some(format!(
                                "radical vector #{k} times e_{{{},{}}} on the {side} leaves the radical",
                                d.name(lab.i()),
                                lab.l
                            )));
                        }
                    }
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

/// All words of the free algebra in degrees of height at most `h`.
fn words_up_to(e: &Engine, h: usize) -> Vec<Word> {
    let d = e.datum();
    super::degrees_up_to(d.rank(), h)
        .iter()
        .flat_map(|b| freealg::words_of_degree(d, b))
        .collect()
}

pub(super) fn form_symmetry(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for beta in super::degrees_up_to(d.rank(), 4) {
        let params = json!({"degree": beta.0});
        out.push(Check::run("form-symmetry", params, || {
            let g = e.free().gram(&beta)?;
            for (r, row) in g.matrix.iter().enumerate() {
                for (c, v) in row.iter().enumerate() {
                    if *v != g.matrix[c][r] {
                        return Ok(Some(format!(
                            "entry ({r},{c}) is {v}, transposed entry is {}",
                            g.matrix[c][r]
                        )));
                    }
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

type Triple = Lin<(Word, Word, Word)>;

fn rho_left(d: &crate::cartan::Datum, t: &TensorElem) -> Triple {
    let mut out = Lin::zero();
    for ((u, v), c) in t {
        for ((u1, u2), c2) in &freealg::coproduct_word(d, u) {
            out.add_term((u1.clone(), u2.clone(), v.clone()), c * c2);
        }
    }
    out
}

fn rho_right(d: &crate::cartan::Datum, t: &TensorElem) -> Triple {
    let mut out = Lin::zero();
    for ((u, v), c) in t {
        for ((v1, v2), c2) in &freealg::coproduct_word(d, v) {
            out.add_term((u.clone(), v1.clone(), v2.clone()), c * c2);
        }
    }
    out
}

pub(super) fn coassociativity(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for beta in super::degrees_up_to(d.rank(), 4) {
        let params = json!({"degree": beta.0});
        out.push(Check::run("coproduct-coassociativity", params, || {
            for w in freealg::words_of_degree(d, &beta) {
                let r = freealg::coproduct_word(d, &w);
                if rho_left(d, &r) != rho_right(d, &r) {
                    return Ok(Some(format!(
                        "fails on {}",
                        freealg::render_word(d, &w, "e")
                    )));
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

pub(super) fn adjunction(e: &Engine, _: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let words = words_up_to(e, 3);
    let mut out = Vec::new();
    for beta in super::degrees_up_to(d.rank(), 3) {
        let params = json!({"degree": beta.0});
        out.push(Check::run("form-coproduct-adjunction", params, || {
            let targets = freealg::words_of_degree(d, &beta);
            for x in words.iter().chain(std::iter::once(&Vec::new())) {
                let rest = beta.sub(&freealg::word_degree(d, x));
                if !rest.is_nonneg() {
                    continue;
                }
                for y in freealg::words_of_degree(d, &rest)
                    .into_iter()
                    .chain(rest.is_zero().then(Vec::new))
                {
                    let xy = freealg::concat(x, &y);
                    let xt: TensorElem = Lin::basis((x.clone(), y.clone()));
                    for z in &targets {
                        let lhs = e.free().word_form(&xy, z);
                        let rhs = e.free().tensor_form(&xt, &freealg::coproduct_word(d, z));
                        if lhs != rhs {
                            return Ok(Some(format!(
                                "x = {}, y = {}, z = {}: lhs = {lhs}, rhs = {rhs}",
                                freealg::render_word(d, x, "e"),
                                freealg::render_word(d, &y, "e"),
                                freealg::render_word(d, z, "e")
                            )));
                        }
                    }
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

pub(super) fn generator_commutator(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ua = e.ualg();
    let d = e.datum();
    let labels = small_labels(d, cfg);
    let mut out = Vec::new();
    for &c in &labels {
        for &c2 in &labels {
            let params = json!({"a": label_param(d, c), "b": label_param(d, c2)});
            out.push(Check::run("generator-commutator", params, || {
                let lhs = ua.commutator(&ua.a(c)?, &ua.b(c2)?)?;
                let rhs = if c == c2 {
                    let k = ua.k_i(c.i(), -c.l()).sub(&ua.k_i(c.i(), c.l()));
                    k.scale(&ua.uplus().tau(c)?)
                } else {
                    Lin::zero()
                };
                Ok(diff_u(ua, &lhs, &rhs))
            })?);
        }
    }
    Ok(out)
}

pub(super) fn mirror_commutator(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ua = e.ualg();
    let up = e.uplus();
    let d = e.datum();
    let mut out = Vec::new();
    let degrees = super::degrees_up_to(d.rank(), 4);
    for c in small_labels(d, cfg) {
        for beta in &degrees {
            let params = json!({"label": label_param(d, c), "degree": beta.0});
            out.push(Check::run("mirror-commutator", params, || {
                let tau = up.tau(c)?;
                let (i, l) = (c.i(), c.l());
                for w in up.basis_of_degree(beta)? {
                    let z = up.word(&w)?;
                    let lower = up.delta(c, Side::Lower, &z)?;
                    let upper = up.delta(c, Side::Upper, &z)?;
                    // [a_il, omega(z)] = tau (omega(delta_il z) K_i^-l - K_i^l omega(delta^il z))
                    let wz = ua.involution(Involution::Omega, &ua.from_pos(&z))?;
                    let lhs = ua.commutator(&ua.a(c)?, &wz)?;
                    let t1 = ua.mul(
                        &ua.involution(Involution::Omega, &ua.from_pos(&lower))?,
                        &ua.k_i(i, -l),
                    )?;
                    let t2 = ua.mul(
                        &ua.k_i(i, l),
                        &ua.involution(Involution::Omega, &ua.from_pos(&upper))?,
                    )?;
                    let rhs = t1.sub(&t2).scale(&tau);
                    if let Some(why) = diff_u(ua, &lhs, &rhs) {
                        return Ok(Some(clip(format!(
                            "a-side on {}: {why}",
                            freealg::render_word(d, &w, "a")
                        ))));
                    }
                    // [b_il, z] = tau (delta_il(z) K_i^l - K_i^-l delta^il(z))
                    let lhs = ua.commutator(&ua.b(c)?, &ua.from_pos(&z))?;
                    let t1 = ua.mul(&ua.from_pos(&lower), &ua.k_i(i, l))?;
                    let t2 = ua.mul(&ua.k_i(i, -l), &ua.from_pos(&upper))?;
                    let rhs = t1.sub(&t2).scale(&tau);
                    if let Some(why) = diff_u(ua, &lhs, &rhs) {
                        return Ok(Some(clip(format!(
                            "b-side on {}: {why}",
                            freealg::render_word(d, &w, "a")
                        ))));
                    }
                }
                Ok(None)
            })?);
        }
    }
    Ok(out)
}

pub(super) fn reflection_duality(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let re = d.real_indices();
    let mut out = Vec::new();
    if re.is_empty() {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for sample in 0..cfg.samples {
        let len = rng.gen_range(1..=4);
        let word: Vec<usize> = (0..len).map(|_| re[rng.gen_range(0..re.len())]).collect();
        let lambda = Weight {
            h_values: (0..d.rank()).map(|_| rng.gen_range(-4..=4)).collect(),
            d_values: (0..d.rank()).map(|_| rng.gen_range(-4..=4)).collect(),
        };
        let h = Coweight {
            h: (0..d.rank()).map(|_| rng.gen_range(-4..=4)).collect(),
            d: (0..d.rank()).map(|_| rng.gen_range(-4..=4)).collect(),
        };
        let params =
            json!({"sample": sample, "word": word.iter().map(|&i| d.name(i)).collect::<Vec<_>>()});
        out.push(Check::run("reflection-duality", params, || {
            let mut hh = h.clone();
            for &i in word.iter().rev() {
                hh = d.reflect_coweight(i, &hh)?;
            }
            let mut ll = lambda.clone();
            for &i in &word {
                ll = d.reflect(i, &ll)?;
            }
            let (lhs, rhs) = (lambda.eval(&hh), ll.eval(&h));
            Ok((lhs != rhs).then(|| format!("lhs = {lhs}, rhs = {rhs}")))
        })?);
    }
    Ok(out)
}
