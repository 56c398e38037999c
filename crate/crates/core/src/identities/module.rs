//! Symmetries acting on irreducible highest-weight modules.

use serde_json::{json, Value};

use super::{braid_pairs, name, SuiteConfig};
use crate::cartan::{BraidOrder, Weight};
use crate::engine::Engine;
use crate::error::Result;
use crate::modules::{HWModule, ModuleKind};
use crate::report::{Check, Status};
use crate::scalar::q_int_signed;
use crate::symmetries::{self, ModuleCheck};
use crate::ualg::{SymOp, Variant};

/// Depth large enough for every braid relation of the datum: `max m_ij + 3`.
pub fn default_depth(e: &Engine) -> usize {
    let d = e.datum();
    let mut top = 1;
    let re = d.real_indices();
    for (a, &i) in re.iter().enumerate() {
        for &j in &re[a + 1..] {
            if let Ok(BraidOrder::Finite(m)) = d.braid_order(i, j) {
                top = top.max(m);
            }
        }
    }
    top + 3
}

/// The irreducible modules exercised by the suite: `V(Lambda_i)` for real
/// `i` and `V(Lambda_i + Lambda_j)` for pairs containing a real index.
pub fn standard_weights(e: &Engine) -> Vec<(String, Weight)> {
    let d = e.datum();
    let r = d.rank();
    let mut out = Vec::new();
    for i in d.real_indices() {
        out.push((format!("Lambda_{}", d.name(i)), Weight::fundamental(r, i)));
    }
    for i in 0..r {
        for j in i + 1..r {
            if d.is_real(i) || d.is_real(j) {
                out.push((
                    format!("Lambda_{}+Lambda_{}", d.name(i), d.name(j)),
                    Weight::fundamental(r, i).add(&Weight::fundamental(r, j)),
                ));
            }
        }
    }
    out
}

pub fn build_modules(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<(String, HWModule)>> {
    let depth = cfg.depth.unwrap_or_else(|| default_depth(e));
    standard_weights(e)
        .into_iter()
        .map(|(tag, w)| {
            Ok((
                tag,
                HWModule::build(e.ualg().clone(), w, depth, ModuleKind::Irreducible)?,
            ))
        })
        .collect()
}

/// Convert an aggregate over vectors into one record.
pub fn module_check(identity: &str, params: Value, mc: &ModuleCheck) -> Check {
    if let Some(c) = &mc.counterexample {
        return Check::new(identity, params, Status::Fails, c.clone());
    }
    if mc.checked == 0 {
        return Check::new(
            identity,
            params,
            Status::Inconclusive,
            format!(
                "no vector fits the module depth; needs depth {}",
                mc.required_depth
            ),
        )
        .with_needed(mc.required_depth);
    }
    let mut detail = format!("{} vectors checked, all equal", mc.checked);
    if mc.inconclusive > 0 {
        detail.push_str(&format!(
            "; {} vectors near the depth boundary skipped (need depth {})",
            mc.inconclusive, mc.required_depth
        ));
    }
    Check::new(identity, params, Status::Holds, detail)
}

fn mparams(tag: &str, m: &HWModule) -> Value {
    json!({"module": tag, "depth": m.depth()})
}

fn with(mut v: Value, key: &str, x: impl Into<Value>) -> Value {
    v[key] = x.into();
    v
}

fn op_name(op: SymOp) -> &'static str {
    match op.variant {
        Variant::Lp => "L'",
        Variant::Lpp => "L''",
    }
}

fn ops(e: &Engine) -> Vec<SymOp> {
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

fn op_params(e: &Engine, tag: &str, m: &HWModule, op: SymOp) -> Value {
    let p = with(mparams(tag, m), "symmetry", op_name(op));
    with(with(p, "i", name(e.datum(), op.i)), "e", op.e)
}

pub(super) fn category_o(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (tag, m) in build_modules(e, cfg)? {
        let mut mc = ModuleCheck::default();
        for (beta, k) in m.basis() {
            let z = m.basis_vec(&beta, k);
            let w = m.weight_at(&beta);
            // K_h acts on M_mu by q^{mu(h)} for the coroots and the d_i.
            for i in 0..d.rank() {
                for h in [crate::cartan::Coweight::coroot(d.rank(), i, 1), {
                    let mut c = crate::cartan::Coweight::zero(d.rank());
                    c.d[i] = 1;
                    c
                }] {
                    let got = m.act_k(&h, &z);
                    let want = z.scale(&crate::Scalar::q_pow(w.eval(&h)));
                    if got != want && mc.counterexample.is_none() {
                        mc.counterexample = Some(format!(
                            "K does not act by the weight on basis vector #{k} at {:?}",
                            beta.0
                        ));
                    }
                }
            }
            mc.checked += 1;
            // Every real raising and lowering generator is locally nilpotent.
            for i in d.real_indices() {
                m.raise_nilpotency(i, &z)?;
                match m.lower_nilpotency(i, &z) {
                    Ok(_) => {}
                    Err(err) if err.is_inconclusive() => {
                        mc.inconclusive += 1;
                        mc.required_depth = mc.required_depth.max(m.depth() + 1);
                    }
                    Err(err) => return Err(err),
                }
            }
        }
        out.push(module_check("module-category-o", mparams(&tag, &m), &mc));
    }
    Ok(out)
}

pub(super) fn irreducibility(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (tag, m) in build_modules(e, cfg)? {
        let params = with(mparams(&tag, &m), "dim", m.dim());
        out.push(Check::run("module-irreducibility", params, || {
            Ok((!m.verify_simple()?)
                .then(|| "a vector below the top is killed by every raising generator".to_string()))
        })?);
    }
    Ok(out)
}

pub(super) fn commutator_action(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (tag, m) in build_modules(e, cfg)? {
        for i in d.real_indices() {
            let mut mc = ModuleCheck::default();
            let qi = d.qi(i);
            for (beta, k) in m.basis() {
                let z = m.basis_vec(&beta, k);
                let outcome = (|| -> Result<Option<String>> {
                    let up = m.act_a(crate::cartan::Label::new(i, 1), &m.act_big_b(i, &z)?)?;
                    let down = m.act_big_b(i, &m.act_a(crate::cartan::Label::new(i, 1), &z)?)?;
                    let want = z.scale(&q_int_signed(m.h_value(&beta, i), qi));
                    Ok((up.sub(&down) != want)
                        .then(|| format!("fails on basis vector #{k} at {:?}", beta.0)))
                })();
                match outcome {
                    Ok(None) => mc.checked += 1,
                    Ok(Some(msg)) => {
                        mc.checked += 1;
                        mc.counterexample.get_or_insert(msg);
                    }
                    Err(err) if err.is_inconclusive() => mc.inconclusive += 1,
                    Err(err) => return Err(err),
                }
            }
            out.push(module_check(
                "module-commutator-action",
                with(mparams(&tag, &m), "i", name(d, i)),
                &mc,
            ));
        }
    }
    Ok(out)
}

fn per_sample(
    m: &HWModule,
    samples: &[crate::modules::ModuleVec],
    f: impl Fn(&crate::modules::ModuleVec) -> Result<Option<String>>,
) -> Result<ModuleCheck> {
    let mut mc = ModuleCheck::default();
    for (k, z) in samples.iter().enumerate() {
        match f(z) {
            Ok(None) => mc.checked += 1,
            Ok(Some(msg)) => {
                mc.checked += 1;
                mc.counterexample
                    .get_or_insert(format!("sample #{k}: {msg}"));
            }
            Err(crate::Error::Inconclusive { required, .. }) => {
                mc.inconclusive += 1;
                mc.required_depth = mc.required_depth.max(required);
            }
            Err(err) => return Err(err),
        }
    }
    let _ = m;
    Ok(mc)
}

pub(super) fn symmetry_inverse(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (tag, m) in build_modules(e, cfg)? {
        let samples = symmetries::sample_vectors(&m, cfg.samples, cfg.seed);
        for op in ops(e) {
            let mc = per_sample(&m, &samples, |z| {
                let back = symmetries::apply_module(
                    &m,
                    op.inverse(),
                    &symmetries::apply_module(&m, op, z)?,
                )?;
                Ok((back != *z).then(|| "round trip differs".to_string()))
            })?;
            out.push(module_check(
                "module-symmetry-inverse",
                op_params(e, &tag, &m, op),
                &mc,
            ));
        }
    }
    Ok(out)
}

pub(super) fn weight_reflection(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (tag, m) in build_modules(e, cfg)? {
        let samples = symmetries::sample_vectors(&m, cfg.samples, cfg.seed);
        for op in ops(e) {
            let mc = per_sample(&m, &samples, |z| {
                Ok((!symmetries::reflects_weights(&m, op, z)?)
                    .then(|| "image leaves the reflected weight space".into()))
            })?;
            out.push(module_check(
                "module-weight-reflection",
                op_params(e, &tag, &m, op),
                &mc,
            ));
        }
    }
    Ok(out)
}

pub(super) fn intertwining(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (tag, m) in build_modules(e, cfg)? {
        let samples = symmetries::sample_vectors(&m, cfg.samples, cfg.seed);
        for op in ops(e) {
            let mc = symmetries::generator_compatibility(&m, op, &samples)?;
            out.push(module_check(
                "module-intertwining",
                op_params(e, &tag, &m, op),
                &mc,
            ));
        }
    }
    Ok(out)
}

pub(super) fn transport(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    let d = e.datum();
    let mut out = Vec::new();
    for (tag, m) in build_modules(e, cfg)? {
        let samples = symmetries::sample_vectors(&m, cfg.samples, cfg.seed);
        for i in d.real_indices() {
            for j in (0..d.rank()).filter(|&j| j != i) {
                let top = if d.is_real(j) {
                    2
                } else {
                    cfg.max_level.min(d.max_l(j) as i64)
                };
                for n in 0..=top {
                    for s in [1, -1] {
                        let mc = symmetries::prop_main_i_verify(&m, i, j, n, s, &samples)?;
                        let p = with(with(mparams(&tag, &m), "i", name(d, i)), "j", name(d, j));
                        out.push(module_check(
                            "module-transport",
                            with(with(p, "n", n), "e", s),
                            &mc,
                        ));
                    }
                }
            }
        }
    }
    Ok(out)
}

pub(super) fn braid_relation(e: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
    Ok(braid_relation_on(e, cfg, &braid_pairs(e.datum()))?.0)
}

/// Module braid checks for the given pairs, with the total number of
/// vectors compared.
pub(super) fn braid_relation_on(
    e: &Engine,
    cfg: &SuiteConfig,
    pairs: &[(usize, usize, usize)],
) -> Result<(Vec<Check>, usize)> {
    let d = e.datum();
    let mut out = Vec::new();
    let mut vectors = 0;
    if pairs.is_empty() {
        return Ok((out, vectors));
    }
    for (tag, m) in build_modules(e, cfg)? {
        for &(i, j, order) in pairs {
            for s in [1, -1] {
                let mc = symmetries::braid_verify_module(&m, i, j, s)?;
                vectors += mc.checked;
                let p = with(with(mparams(&tag, &m), "i", name(d, i)), "j", name(d, j));
                out.push(module_check(
                    "module-braid-relation",
                    with(with(p, "e", s), "m_ij", order),
                    &mc,
                ));
            }
        }
    }
    Ok((out, vectors))
}
