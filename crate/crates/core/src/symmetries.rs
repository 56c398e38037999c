//! Lusztig symmetries on modules via the finite triple sums, and exact
//! verifiers for the braid relations, the intertwining property and the
//! transport of the `F`/`G` families.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cartan::{BraidOrder, RootVec};
use crate::error::{Error, Result};
use crate::modules::{HWModule, ModuleVec};
use crate::scalar::Scalar;
use crate::ualg::{FamilyKind, SymOp, UElem, Variant};

/// Outcome of a verification over many module vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ModuleCheck {
    /// Vectors on which both sides were computed exactly and compared.
    pub checked: usize,
    /// Vectors skipped because a side needed more depth than the module has.
    pub inconclusive: usize,
    /// Largest depth required by a skipped vector.
    pub required_depth: usize,
    /// First counterexample, as a description.
    pub counterexample: Option<String>,
}

impl ModuleCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none() && self.checked > 0
    }

    pub fn is_inconclusive(&self) -> bool {
        self.counterexample.is_none() && self.checked == 0
    }

    fn record(&mut self, outcome: Result<Option<String>>) -> Result<()> {
        match outcome {
            Ok(None) => self.checked += 1,
            Ok(Some(msg)) => {
                self.checked += 1;
                if self.counterexample.is_none() {
                    self.counterexample = Some(msg);
                }
            }
            Err(Error::Inconclusive { required, .. }) => {
                self.inconclusive += 1;
                self.required_depth = self.required_depth.max(required);
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }

    pub fn merge(&mut self, o: &ModuleCheck) {
        self.checked += o.checked;
        self.inconclusive += o.inconclusive;
        self.required_depth = self.required_depth.max(o.required_depth);
        if self.counterexample.is_none() {
            self.counterexample = o.counterexample.clone();
        }
    }
}

fn sign(b: i64) -> Scalar {
    Scalar::int(if b % 2 == 0 { 1 } else { -1 })
}

/// Apply a symmetry to a weight vector `z` in `M^n`.
fn apply_weight_vector(
    m: &HWModule,
    op: SymOp,
    beta: &RootVec,
    z: &ModuleVec,
) -> Result<ModuleVec> {
    let i = op.i;
    let n = m.h_value(beta, i);
    let qi = m.datum().qi(i);
    // Bottom of the i-string through z: B_i^c z = 0 for c > n + b0.
    let b0 = m.raise_nilpotency(i, z)? as i64 - 1;
    let reach = n + b0;
    let required = beta.height() + reach.max(0);
    if required as usize > m.depth() {
        return Err(Error::Inconclusive {
            what: format!(
                "symmetry at index `{}` on a vector at depth {:?}",
                m.datum().name(i),
                beta.0
            ),
            required: required as usize,
        });
    }
    let e = op.e;
    let mut out = ModuleVec::zero();
    match op.variant {
        Variant::Lp => {
            // sum_{a-b+c=n} (-1)^b q_i^{e(-ac+b)} B^{(a)} a^{(b)} B^{(c)} z
            for c in 0..=reach.max(0) {
                let wc = m.act_big_b_div(i, c, z)?;
                if wc.is_zero() {
                    break;
                }
                let mut b = 0;
                loop {
                    let wb = m.act_a_div(i, b, &wc)?;
                    if wb.is_zero() {
                        break;
                    }
                    let a = n + b - c;
                    if a >= 0 {
                        let wa = m.act_big_b_div(i, a, &wb)?;
                        out.add_scaled(&wa, &(&sign(b) * &Scalar::q_pow(qi * e * (-a * c + b))));
                    }
                    b += 1;
                }
            }
        }
        Variant::Lpp => {
            // sum_{-a+b-c=n} (-1)^b q_i^{e(-ac+b)} a^{(a)} B^{(b)} a^{(c)} z
            let mut c = 0;
            loop {
                let wc = m.act_a_div(i, c, z)?;
                if wc.is_zero() {
                    break;
                }
                let nc = n + 2 * c;
                let b_reach = nc + (b0 - c);
                for b in 0..=b_reach.max(0) {
                    let wb = m.act_big_b_div(i, b, &wc)?;
                    if wb.is_zero() {
                        break;
                    }
                    let a = b - c - n;
                    if a >= 0 {
                        let wa = m.act_a_div(i, a, &wb)?;
                        out.add_scaled(&wa, &(&sign(b) * &Scalar::q_pow(qi * e * (-a * c + b))));
                    }
                }
                c += 1;
            }
        }
    }
    Ok(out)
}

/// `L'_{i,e}(v)` or `L''_{i,e}(v)` on a module vector.
pub fn apply_module(m: &HWModule, op: SymOp, v: &ModuleVec) -> Result<ModuleVec> {
    m.datum().require_real(op.i)?;
    let mut out = ModuleVec::zero();
    for (beta, coords) in v.parts() {
        let z = ModuleVec::from_part(beta.clone(), coords.clone());
        out.add_scaled(&apply_weight_vector(m, op, beta, &z)?, &Scalar::one());
    }
    Ok(out)
}

/// Apply `L_{w_1} L_{w_2} ... L_{w_N}` (rightmost first).
pub fn apply_word(
    m: &HWModule,
    variant: Variant,
    word: &[usize],
    e: i64,
    v: &ModuleVec,
) -> Result<ModuleVec> {
    let mut w = v.clone();
    for &i in word.iter().rev() {
        w = apply_module(m, SymOp::new(variant, i, e)?, &w)?;
    }
    Ok(w)
}

fn describe(m: &HWModule, beta: &RootVec, k: usize) -> String {
    format!(
        "basis vector #{k} of weight {:?}",
        m.weight_at(beta).h_values
    )
}

/// Both `m_ij`-fold alternating products of `L''_{*,-e}` (and of `L'_{*,e}`)
/// agree on every basis vector whose computation fits in the module.
pub fn braid_verify_module(m: &HWModule, i: usize, j: usize, e: i64) -> Result<ModuleCheck> {
    let d = m.datum();
    d.require_real(i)?;
    d.require_real(j)?;
    let order = match d.braid_order(i, j)? {
        BraidOrder::Finite(k) => k,
        BraidOrder::Infinite => {
            return Err(Error::domain(format!(
                "indices `{}` and `{}` generate an infinite dihedral group",
                d.name(i),
                d.name(j)
            )))
        }
    };
    let w1: Vec<usize> = (0..order).map(|k| if k % 2 == 0 { i } else { j }).collect();
    let w2: Vec<usize> = (0..order).map(|k| if k % 2 == 0 { j } else { i }).collect();
    let mut report = ModuleCheck::default();
    for (beta, k) in m.basis() {
        let z = m.basis_vec(&beta, k);
        for (variant, sgn) in [(Variant::Lpp, -e), (Variant::Lp, e)] {
            let outcome = (|| {
                let x1 = apply_word(m, variant, &w1, sgn, &z)?;
                let x2 = apply_word(m, variant, &w2, sgn, &z)?;
                Ok((x1 != x2).then(|| {
                    format!(
                        "{:?} braid relation fails on {}",
                        variant,
                        describe(m, &beta, k)
                    )
                }))
            })();
            report.record(outcome)?;
        }
    }
    Ok(report)
}

/// Deterministic sample of homogeneous vectors: each is a random small
/// integer combination of the basis of a random weight space.
pub fn sample_vectors(m: &HWModule, count: usize, seed: u64) -> Vec<ModuleVec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let levels: Vec<(RootVec, usize)> = m.levels().map(|l| (l.beta.clone(), l.dim())).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let (beta, dim) = levels
            .choose(&mut rng)
            .expect("a module has its top level")
            .clone();
        let coords: Vec<Scalar> = (0..dim)
            .map(|_| {
                let v: i64 = rng.gen_range(-3..=3);
                Scalar::int(if v == 0 { 1 } else { v })
            })
            .collect();
        out.push(ModuleVec::from_part(beta, coords));
    }
    out
}

/// `L(u z) = L(u) L(z)` on sampled vectors.
pub fn intertwining_verify(
    m: &HWModule,
    op: SymOp,
    u: &UElem,
    samples: &[ModuleVec],
) -> Result<ModuleCheck> {
    let lu = m.ualg().symmetry(op, u)?;
    let mut report = ModuleCheck::default();
    for (k, z) in samples.iter().enumerate() {
        let outcome = (|| {
            let lhs = apply_module(m, op, &m.act(u, z)?)?;
            let rhs = m.act(&lu, &apply_module(m, op, z)?)?;
            Ok((lhs != rhs).then(|| format!("intertwining fails on sample #{k}")))
        })();
        report.record(outcome)?;
    }
    Ok(report)
}

/// The four transport identities
/// `L''_{i,-e}(F_{n,bn,e} z) = a_{jn} L''_{i,-e}(z)`, `L'_{i,e}(F'_{n,bn,e} z) = a_{jn} L'_{i,e}(z)`
/// and their `G`, `b_{jn}` counterparts, on sampled vectors.
pub fn prop_main_i_verify(
    m: &HWModule,
    i: usize,
    j: usize,
    n: i64,
    e: i64,
    samples: &[ModuleVec],
) -> Result<ModuleCheck> {
    let ua = m.ualg();
    let d = m.datum();
    let bn = -d.a(i, j) * n;
    let cases = [
        (
            FamilyKind::F,
            SymOp::new(Variant::Lpp, i, -e)?,
            ua.a_jn(j, n)?,
        ),
        (
            FamilyKind::Fp,
            SymOp::new(Variant::Lp, i, e)?,
            ua.a_jn(j, n)?,
        ),
        (
            FamilyKind::G,
            SymOp::new(Variant::Lpp, i, -e)?,
            ua.b_jn(j, n)?,
        ),
        (
            FamilyKind::Gp,
            SymOp::new(Variant::Lp, i, e)?,
            ua.b_jn(j, n)?,
        ),
    ];
    let mut report = ModuleCheck::default();
    for (kind, op, gen) in &cases {
        let fam = ua.family(*kind, i, j, n, bn, e)?;
        for (k, z) in samples.iter().enumerate() {
            let outcome = (|| {
                let lhs = apply_module(m, *op, &m.act(&fam, z)?)?;
                let rhs = m.act(gen, &apply_module(m, *op, z)?)?;
                Ok((lhs != rhs)
                    .then(|| format!("{kind:?} transport identity fails on sample #{k}")))
            })();
            report.record(outcome)?;
        }
    }
    Ok(report)
}

/// `L(u v) = L(u) L(v)` in the module sense for a single generator: the
/// module-side and algebra-side symmetries agree on every sampled vector.
pub fn generator_compatibility(
    m: &HWModule,
    op: SymOp,
    samples: &[ModuleVec],
) -> Result<ModuleCheck> {
    let ua = m.ualg();
    let mut report = ModuleCheck::default();
    let mut gens: Vec<UElem> = Vec::new();
    for &lab in m.labels() {
        if lab.l() as usize <= 2 {
            gens.push(ua.a(lab)?);
            gens.push(ua.b(lab)?);
        }
    }
    for i in 0..m.datum().rank() {
        gens.push(ua.k_i(i, 1));
    }
    for g in &gens {
        report.merge(&intertwining_verify(m, op, g, samples)?);
    }
    Ok(report)
}

/// The weight of `L(z)` is `r_i` of the weight of `z`.
pub fn reflects_weights(m: &HWModule, op: SymOp, z: &ModuleVec) -> Result<bool> {
    let img = apply_module(m, op, z)?;
    for (beta, _) in img.parts() {
        let w = m.weight_at(beta);
        let ok = z.parts().any(|(b, _)| {
            m.datum()
                .reflect(op.i, &m.weight_at(b))
                .map(|r| r == w)
                .unwrap_or(false)
        });
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
