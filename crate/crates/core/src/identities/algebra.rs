//! The operator families `F`, `F'`, `G`, `G'`, the symmetries on `U` and
//! their braid relations.

use serde_json::json;

use super::{
    braid_pairs, diff_u, generators, label_param, levels, name, small_labels, SuiteConfig,
};
use crate::engine::Engine;
use crate::error::Result;
use crate::lin::Lin;
use crate::report::Check;
use crate::scalar::{q_binom_signed, q_int_signed};
use crate::ualg::{FamilyKind, Involution, SymOp, UAlg, UElem, Variant};
use crate::Scalar;

fn sign(k: i64) -> Scalar {
    Scalar::int(if k % 2 == 0 { 1 } else { -1 })
}

/// Every `(i, j, n, e)` with `i` real and `j != i`.
fn family_params(e: &Engine, cfg: &SuiteConfig) -> Vec<(usize, usize, i64, i64)> {
    let d = e.datum();
    let mut out = Vec::new();
    for i in d.real_indices() {
        for j in (0..d.rank()).filter(|&j| j != i) {
            for n in levels(d, j, cfg) {
                for sgn in [1, -1] {
                    out.push((i, j, n, sgn));
                }
            }
        }
    }
    out
}

fn fam(ua: &UAlg, kind: FamilyKind, i: usize, j: usize, n: i64, m: i64, e: i64) -> Result<UElem> {
    ua.family(kind, i, j, n, m, e)
}

pub(super) fn raising_commutator(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, j, n, s) in family_params(e, cfg) {
        let (qi, bn) = (d.qi(i), -d.a(i, j) * n);
        for m in 0..=cfg.max_param {
            let params = json!({"i": name(d, i), "j": name(d, j), "n": n, "m": m, "e": s});
            out.push(Check::run("family-raising-commutator", params, || {
                let f = fam(ua, FamilyKind::F, i, j, n, m, s)?;
                let a = ua.a_div(i, 1)?;
                let lhs = ua
                    .mul(&f, &a)?
                    .sub(&ua.mul(&a, &f)?.scale(&Scalar::q_pow(qi * s * (bn - 2 * m))));
                let rhs =
                    fam(ua, FamilyKind::F, i, j, n, m + 1, s)?.scale(&q_int_signed(m + 1, qi));
                Ok(diff_u(ua, &lhs, &rhs))
            })?);
        }
    }
    Ok(out)
}

pub(super) fn raising_divided_power(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, j, n, s) in family_params(e, cfg) {
        let (qi, bn) = (d.qi(i), -d.a(i, j) * n);
        for m in 0..=cfg.max_param {
            for p in 1..=cfg.max_param {
                let params =
                    json!({"i": name(d, i), "j": name(d, j), "n": n, "m": m, "p": p, "e": s});
                out.push(Check::run("family-raising-divided-power", params, || {
                    let lhs = ua.mul(&ua.a_div(i, p)?, &fam(ua, FamilyKind::F, i, j, n, m, s)?)?;
                    let mut rhs = Lin::zero();
                    for pp in 0..=p {
                        let c = &(&sign(pp)
                            * &Scalar::q_pow(qi * s * (2 * p * m - bn * p + p * pp - pp)))
                            * &q_binom_signed(m + pp, pp, qi);
                        let t = ua.mul(
                            &fam(ua, FamilyKind::F, i, j, n, m + pp, s)?,
                            &ua.a_div(i, p - pp)?,
                        )?;
                        rhs.add_scaled(&t, &c);
                    }
                    Ok(diff_u(ua, &lhs, &rhs))
                })?);
            }
        }
    }
    Ok(out)
}

pub(super) fn lowering_commutator(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, j, n, s) in family_params(e, cfg) {
        let (qi, bn) = (d.qi(i), -d.a(i, j) * n);
        for m in 0..=cfg.max_param {
            let params = json!({"i": name(d, i), "j": name(d, j), "n": n, "m": m, "e": s});
            out.push(Check::run("family-lowering-commutator", params, || {
                let f = fam(ua, FamilyKind::F, i, j, n, m, s)?;
                let b = ua.big_b(i)?;
                let lhs = ua.mul(&f, &b)?.sub(&ua.mul(&b, &f)?);
                let rhs = ua
                    .mul(&ua.k_i(i, -s), &fam(ua, FamilyKind::F, i, j, n, m - 1, s)?)?
                    .scale(&q_int_signed(bn - m + 1, qi));
                Ok(diff_u(ua, &lhs, &rhs))
            })?);
        }
    }
    Ok(out)
}

pub(super) fn lowering_divided_power(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, j, n, s) in family_params(e, cfg) {
        let (qi, bn) = (d.qi(i), -d.a(i, j) * n);
        for m in 0..=cfg.max_param {
            for p in 1..=cfg.max_param {
                let params =
                    json!({"i": name(d, i), "j": name(d, j), "n": n, "m": m, "p": p, "e": s});
                out.push(Check::run("family-lowering-divided-power", params, || {
                    let lhs = ua.mul(
                        &ua.big_b_div(i, p)?,
                        &fam(ua, FamilyKind::F, i, j, n, m, s)?,
                    )?;
                    let mut rhs = Lin::zero();
                    for pp in 0..=p {
                        let c = &(&sign(pp) * &Scalar::q_pow(-qi * s * (p * pp - pp)))
                            * &q_binom_signed(bn - m + pp, pp, qi);
                        let t = ua.mul_all(&[
                            &ua.k_i(i, -s * pp),
                            &fam(ua, FamilyKind::F, i, j, n, m - pp, s)?,
                            &ua.big_b_div(i, p - pp)?,
                        ])?;
                        rhs.add_scaled(&t, &c);
                    }
                    Ok(diff_u(ua, &lhs, &rhs))
                })?);
            }
        }
    }
    Ok(out)
}

pub(super) fn boundary_commutator(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, j, n, s) in family_params(e, cfg) {
        let bn = -d.a(i, j) * n;
        let m = 1 + bn;
        if d.is_real(j) {
            if n == 0 {
                continue;
            }
            let params = json!({"i": name(d, i), "j": name(d, j), "n": n, "e": s});
            out.push(Check::run("family-boundary-commutator", params, || {
                let qj = d.qi(j);
                let f = fam(ua, FamilyKind::F, i, j, n, m, s)?;
                let b = ua.big_b(j)?;
                let lhs = ua.mul(&b, &f)?.sub(&ua.mul(&f, &b)?);
                let inv = (&Scalar::q_pow(qj) - &Scalar::q_pow(-qj)).inv()?;
                let t1 = ua
                    .mul(&ua.k_i(j, -1), &fam(ua, FamilyKind::F, i, j, n - 1, m, 1)?)?
                    .scale(&(&Scalar::q_pow(qj * (n - 1)) * &inv));
                let t2 = ua
                    .mul(&ua.k_i(j, 1), &fam(ua, FamilyKind::F, i, j, n - 1, m, -1)?)?
                    .scale(&(&Scalar::q_pow(qj * (1 - n)) * &inv));
                Ok(diff_u(ua, &lhs, &t1.sub(&t2)))
            })?);
        } else {
            for lab in small_labels(d, cfg).into_iter().filter(|lab| lab.i() == j) {
                let params = json!({"i": name(d, i), "j": name(d, j), "n": n, "e": s, "b": label_param(d, lab)});
                out.push(Check::run("family-boundary-commutator", params, || {
                    let f = fam(ua, FamilyKind::F, i, j, n, m, s)?;
                    let b = ua.b(lab)?;
                    Ok(diff_u(ua, &ua.commutator(&b, &f)?, &Lin::zero()))
                })?);
            }
        }
    }
    Ok(out)
}

pub(super) fn family_exchange(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    for (i, j, n, s) in family_params(e, cfg) {
        let bn = -d.a(i, j) * n;
        for m in 0..=cfg.max_param {
            let params = json!({"i": name(d, i), "j": name(d, j), "n": n, "m": m, "e": s});
            out.push(Check::run("family-symmetry-exchange", params, || {
                let lp = SymOp::new(Variant::Lp, i, s)?;
                let lhs = ua.symmetry(lp, &fam(ua, FamilyKind::Fp, i, j, n, m, s)?)?;
                let rhs = fam(ua, FamilyKind::F, i, j, n, bn - m, s)?;
                if let Some(why) = diff_u(ua, &lhs, &rhs) {
                    return Ok(Some(format!("L' on F': {why}")));
                }
                let lpp = SymOp::new(Variant::Lpp, i, -s)?;
                let lhs = ua.symmetry(lpp, &fam(ua, FamilyKind::F, i, j, n, m, s)?)?;
                let rhs = fam(ua, FamilyKind::Fp, i, j, n, bn - m, s)?;
                Ok(diff_u(ua, &lhs, &rhs).map(|why| format!("L'' on F: {why}")))
            })?);
        }
    }
    Ok(out)
}

/// `(variant, i, e)` for every real `i`.
fn all_ops(e: &Engine) -> Vec<SymOp> {
    let mut out = Vec::new();
    for i in e.datum().real_indices() {
        for variant in [Variant::Lp, Variant::Lpp] {
            for s in [1, -1] {
                out.push(SymOp { variant, i, e: s });
            }
        }
    }
    out
}

fn op_params(e: &Engine, op: SymOp) -> serde_json::Value {
    let v = match op.variant {
        Variant::Lp => "L'",
        Variant::Lpp => "L''",
    };
    json!({"symmetry": v, "i": name(e.datum(), op.i), "e": op.e})
}

/// Generators plus a few products, for checks that should hold on all of `U`.
fn test_elements(ua: &UAlg, cfg: &SuiteConfig) -> Result<Vec<(String, UElem)>> {
    let gens = generators(ua, cfg)?;
    let mut out = gens.clone();
    let small: Vec<&(String, UElem)> = gens
        .iter()
        .filter(|(n, _)| !n.starts_with('K') && n.ends_with(",1}"))
        .collect();
    for (n1, u1) in &small {
        for (n2, u2) in &small {
            out.push((format!("{n1} {n2}"), ua.mul(u1, u2)?));
        }
    }
    Ok(out)
}

pub(super) fn symmetry_inverse(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ua = e.ualg();
    let elems = test_elements(ua, cfg)?;
    let mut out = Vec::new();
    for op in all_ops(e) {
        out.push(Check::run("symmetry-inverse", op_params(e, op), || {
            for (label, u) in &elems {
                let back = ua.symmetry(op.inverse(), &ua.symmetry(op, u)?)?;
                if let Some(why) = diff_u(ua, &back, u) {
                    return Ok(Some(format!("on {label}: {why}")));
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

pub(super) fn root_space(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let elems = test_elements(ua, cfg)?;
    let mut out = Vec::new();
    for op in all_ops(e) {
        out.push(Check::run("symmetry-root-space", op_params(e, op), || {
            for (label, u) in &elems {
                let img = ua.symmetry(op, u)?;
                if let Some((t, _)) = u.iter().next() {
                    let want = d.reflect_root(op.i, &ua.term_degree(t))?;
                    if let Some((t2, _)) = img.iter().find(|(t2, _)| ua.term_degree(t2) != want) {
                        return Ok(Some(format!(
                            "image of {label} has a term of degree {:?}, expected {:?}",
                            ua.term_degree(t2).0,
                            want.0
                        )));
                    }
                    break;
                }
            }
            Ok(None)
        })?);
    }
    Ok(out)
}

pub(super) fn grading_relation(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let elems = test_elements(ua, cfg)?;
    let mut out = Vec::new();
    for i in d.real_indices() {
        for s in [1, -1] {
            let params = json!({"i": name(d, i), "e": s});
            out.push(Check::run("symmetry-grading-relation", params, || {
                let qi = d.qi(i);
                for (label, u) in &elems {
                    let Some(n) = ua.k_grade(i, u) else { continue };
                    let lhs = ua.symmetry(SymOp::new(Variant::Lpp, i, s)?, u)?;
                    let rhs = ua
                        .symmetry(SymOp::new(Variant::Lp, i, s)?, u)?
                        .scale(&(&sign(n) * &Scalar::q_pow(qi * s * n)));
                    if let Some(why) = diff_u(ua, &lhs, &rhs) {
                        return Ok(Some(format!("on {label}: {why}")));
                    }
                }
                Ok(None)
            })?);
        }
    }
    Ok(out)
}

fn intertwining(e: &Engine, cfg: &SuiteConfig, star: bool, identity: &str) -> Result<Vec<Check>> {
    let ua = e.ualg();
    let elems = test_elements(ua, cfg)?;
    let mut out = Vec::new();
    let variants: &[(Involution, &str)] = if star {
        &[(Involution::Star, "star")]
    } else {
        &[
            (Involution::Varpi, "all real indices"),
            (Involution::VarpiAt(usize::MAX), "symmetry index"),
        ]
    };
    for op in all_ops(e)
        .into_iter()
        .filter(|op| op.variant == Variant::Lp)
    {
        for &(kind, twist) in variants {
            // varpi L'_{i,e} = L''_{i,e} varpi and * L'_{i,e} = L''_{i,-e} *
            let kind = if let Involution::VarpiAt(_) = kind {
                Involution::VarpiAt(op.i)
            } else {
                kind
            };
            let other = match kind {
                Involution::Star => SymOp {
                    variant: Variant::Lpp,
                    i: op.i,
                    e: -op.e,
                },
                _ => SymOp {
                    variant: Variant::Lpp,
                    i: op.i,
                    e: op.e,
                },
            };
            let mut params = op_params(e, op);
            if !star {
                params["twist"] = json!(twist);
            }
            out.push(Check::run(identity, params, || {
                for (label, u) in &elems {
                    let lhs = ua.involution(kind, &ua.symmetry(op, u)?)?;
                    let rhs = ua.symmetry(other, &ua.involution(kind, u)?)?;
                    if let Some(why) = diff_u(ua, &lhs, &rhs) {
                        return Ok(Some(format!("on {label}: {why}")));
                    }
                }
                Ok(None)
            })?);
        }
    }
    Ok(out)
}

pub(super) fn varpi_intertwining(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    intertwining(e, cfg, false, "varpi-intertwining")
}

pub(super) fn star_intertwining(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    intertwining(e, cfg, true, "star-intertwining")
}

pub(super) fn involution_squares(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let ua = e.ualg();
    let elems = test_elements(ua, cfg)?;
    let mut out = Vec::new();
    let mut kinds = vec![
        (Involution::Omega, "omega".to_string()),
        (Involution::Varpi, "varpi".to_string()),
    ];
    for i in e.datum().real_indices() {
        kinds.push((
            Involution::VarpiAt(i),
            format!("varpi at {}", e.datum().name(i)),
        ));
    }
    kinds.push((Involution::Star, "star".to_string()));
    for (kind, label) in kinds {
        out.push(Check::run(
            "involution-squares",
            json!({"involution": label}),
            || {
                for (name, u) in &elems {
                    let back = ua.involution(kind, &ua.involution(kind, u)?)?;
                    if let Some(why) = diff_u(ua, &back, u) {
                        return Ok(Some(format!("on {name}: {why}")));
                    }
                }
                Ok(None)
            },
        )?);
    }
    Ok(out)
}

pub(super) fn braid_relation(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    braid_relation_on(e, cfg, &braid_pairs(e.datum()))
}

pub(super) fn braid_relation_on(
    e: &Engine,
    cfg: &SuiteConfig,
    pairs: &[(usize, usize, usize)],
) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let gens = generators(ua, cfg)?;
    let mut out = Vec::new();
    for &(i, j, m) in pairs {
        let w1: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { i } else { j }).collect();
        let w2: Vec<usize> = (0..m).map(|k| if k % 2 == 0 { j } else { i }).collect();
        for variant in [Variant::Lp, Variant::Lpp] {
            for s in [1, -1] {
                let mut params = op_params(e, SymOp { variant, i, e: s });
                params["j"] = name(d, j);
                params["m_ij"] = json!(m);
                out.push(Check::run("braid-relation-algebra", params, || {
                    for (label, g) in &gens {
                        let x1 = ua.braid_apply(variant, &w1, s, g)?;
                        let x2 = ua.braid_apply(variant, &w2, s, g)?;
                        if let Some(why) = diff_u(ua, &x1, &x2) {
                            return Ok(Some(format!("on {label}: {why}")));
                        }
                    }
                    Ok(None)
                })?);
            }
        }
    }
    Ok(out)
}

/// Reduced words of length `1..=max_len` over the real indices.
fn reduced_words(e: &Engine, max_len: usize) -> Result<Vec<Vec<usize>>> {
    let d = e.datum();
    let re = d.real_indices();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for &i in &re {
                let mut w2 = w.clone();
                w2.push(i);
                if d.is_reduced(&w2)? {
                    next.push(w2);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    Ok(out)
}

pub(super) fn braid_positivity(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let (ua, d) = (e.ualg(), e.datum());
    let mut out = Vec::new();
    let words = reduced_words(e, 4)?;
    for variant in [Variant::Lp, Variant::Lpp] {
        for s in [1, -1] {
            let vname = if variant == Variant::Lp { "L'" } else { "L''" };
            // Along a reduced word, the image of the last simple generator is positive.
            for w in words.iter().filter(|w| w.len() >= 2) {
                let (head, last) = w.split_at(w.len() - 1);
                let params = json!({"symmetry": vname, "e": s, "word": w.iter().map(|&k| d.name(k)).collect::<Vec<_>>()});
                out.push(Check::run("braid-positivity", params, || {
                    let img = ua.braid_apply(variant, head, s, &ua.a_div(last[0], 1)?)?;
                    Ok((!ua.is_positive(&img))
                        .then(|| format!("image is not in U^+: {}", super::clip(ua.render(&img)))))
                })?);
            }
            // Imaginary generators stay positive under every reduced word.
            for lab in small_labels(d, cfg)
                .into_iter()
                .filter(|lab| !d.is_real(lab.i()))
            {
                for w in words.iter().filter(|w| w.len() <= 2) {
                    let params = json!({"symmetry": vname, "e": s, "label": label_param(d, lab),
                                        "word": w.iter().map(|&k| d.name(k)).collect::<Vec<_>>()});
                    out.push(Check::run("braid-positivity", params, || {
                        let img = ua.braid_apply(variant, w, s, &ua.a(lab)?)?;
                        Ok((!ua.is_positive(&img)).then(|| {
                            format!("image is not in U^+: {}", super::clip(ua.render(&img)))
                        }))
                    })?);
                }
            }
        }
    }
    Ok(out)
}
