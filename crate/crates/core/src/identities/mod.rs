//! The registry of mechanically verified identities. Each entry enumerates
//! its own parameter tuples from the datum and the suite budget, computes
//! both sides exactly and emits one [`Check`] per tuple.

mod algebra;
mod form;
mod foundations;
mod module;

pub use module::{default_depth as default_module_depth, standard_weights};

use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::cartan::{BraidOrder, Datum, Label, RootVec};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::report::{sort_checks, Check};
use crate::ualg::{UAlg, UElem};
use crate::uplus::{self, PElem};

/// Which part of the theory an identity belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    /// The free algebra, the form, primitive generators and the relations of `U`.
    Foundations,
    /// The operator families, the symmetries on `U` and the braid relations.
    Symmetries,
    /// The subalgebras `U^+[i]`, the projections and invariance of the form.
    Form,
    /// Symmetries acting on highest-weight modules.
    Modules,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Foundations,
        Suite::Symmetries,
        Suite::Form,
        Suite::Modules,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Foundations => "foundations",
            Suite::Symmetries => "symmetries",
            Suite::Form => "form",
            Suite::Modules => "modules",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| {
                Error::domain(format!(
                    "unknown suite `{s}` (expected foundations, symmetries, form or modules)"
                ))
            })
    }
}

/// Parameter ranges shared by all identities.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Bound on the integer parameters `m`, `n`, `p`.
    pub max_param: i64,
    /// Bound on the level `l` of imaginary generators.
    pub max_level: i64,
    /// Bound on `l beta = -l a_ij` for the `f`/`g` families.
    pub max_lbeta: i64,
    /// Height bound for degree sweeps.
    pub max_height: usize,
    /// Sampled module vectors per module.
    pub samples: usize,
    pub seed: u64,
    /// Module depth; `None` picks `max m_ij + 3`.
    pub depth: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_param: 3,
            max_level: 2,
            max_lbeta: 4,
            max_height: 6,
            samples: 50,
            seed: 0,
            depth: None,
        }
    }
}

type Runner = fn(&Engine, &SuiteConfig) -> Result<Vec<Check>>;

pub struct Identity {
    pub name: &'static str,
    pub suite: Suite,
    pub summary: &'static str,
    run: Runner,
}

impl Identity {
    pub fn run(&self, engine: &Engine, cfg: &SuiteConfig) -> Result<Vec<Check>> {
        (self.run)(engine, cfg)
    }
}

macro_rules! entry {
    ($name:literal, $suite:ident, $summary:literal, $f:path) => {
        Identity {
            name: $name,
            suite: Suite::$suite,
            summary: $summary,
            run: $f,
        }
    };
}

static REGISTRY: &[Identity] = &[
    // foundations
    entry!(
        "primitive-leading-term",
        Foundations,
        "a_il - e_il involves only letters (i,k) with k < l",
        foundations::leading_term
    ),
    entry!(
        "primitive-orthogonality",
        Foundations,
        "a_il is orthogonal to every e_{i,c} with all parts of c below l",
        foundations::orthogonality
    ),
    entry!(
        "primitive-spanning",
        Foundations,
        "the a_{i,c} span the same space as the e_{i,c} modulo the radical",
        foundations::spanning
    ),
    entry!(
        "primitive-coproduct",
        Foundations,
        "rho(a_il) = a_il (x) 1 + 1 (x) a_il modulo the radical",
        foundations::primitive_coproduct
    ),
    entry!(
        "primitive-bar-invariance",
        Foundations,
        "the coefficients of a_il are bar-invariant (asserted for nu = 1)",
        foundations::bar_invariance
    ),
    entry!(
        "partition-orthogonality",
        Foundations,
        "{a_{i,c}, a_{i,c'}} = 0 when c, c' rearrange to different partitions",
        foundations::partition_orthogonality
    ),
    entry!(
        "composition-reversal",
        Foundations,
        "reversing c' twists {a_{i,c}, a_{i,c'}} by q_(i)^m and the bar involution",
        foundations::reversal
    ),
    entry!(
        "serre-radical",
        Foundations,
        "every Serre element lies in the radical of the form",
        foundations::serre_radical
    ),
    entry!(
        "radical-ideal",
        Foundations,
        "the radical of the form is a two-sided ideal of the free algebra",
        foundations::radical_ideal
    ),
    entry!(
        "form-symmetry",
        Foundations,
        "{x, y} = {y, x}",
        foundations::form_symmetry
    ),
    entry!(
        "coproduct-coassociativity",
        Foundations,
        "(rho (x) id) rho = (id (x) rho) rho",
        foundations::coassociativity
    ),
    entry!(
        "form-coproduct-adjunction",
        Foundations,
        "{xy, z} = {x (x) y, rho(z)}",
        foundations::adjunction
    ),
    entry!(
        "generator-commutator",
        Foundations,
        "a_il b_jk - b_jk a_il = delta delta tau_il (K_i^-l - K_i^l)",
        foundations::generator_commutator
    ),
    entry!(
        "mirror-commutator",
        Foundations,
        "[a_il, omega(z)] and [b_il, z] through the derivations delta_il, delta^il",
        foundations::mirror_commutator
    ),
    entry!(
        "reflection-duality",
        Foundations,
        "lambda(r_1 ... r_N(h)) = (r_N ... r_1(lambda))(h)",
        foundations::reflection_duality
    ),
    // symmetries
    entry!(
        "family-raising-commutator",
        Symmetries,
        "-q_i^{e(beta n - 2m)} a_i F_{n,m} + F_{n,m} a_i = [m+1]_i F_{n,m+1}",
        algebra::raising_commutator
    ),
    entry!(
        "family-raising-divided-power",
        Symmetries,
        "a_i^(p) F_{n,m} expanded through F_{n,m+p'} a_i^(p-p')",
        algebra::raising_divided_power
    ),
    entry!(
        "family-lowering-commutator",
        Symmetries,
        "-B_i F_{n,m} + F_{n,m} B_i = [beta n - m + 1]_i K_{-ei} F_{n,m-1}",
        algebra::lowering_commutator
    ),
    entry!(
        "family-lowering-divided-power",
        Symmetries,
        "B_i^(p) F_{n,m} expanded through K_{-ep'i} F_{n,m-p'} B_i^(p-p')",
        algebra::lowering_divided_power
    ),
    entry!(
        "family-boundary-commutator",
        Symmetries,
        "commutators of b_j with F_{n,1+beta n} (real and imaginary j)",
        algebra::boundary_commutator
    ),
    entry!(
        "family-symmetry-exchange",
        Symmetries,
        "L'_{i,e}(F'_{n,m}) = F_{n,beta n-m} and L''_{i,-e}(F_{n,m}) = F'_{n,beta n-m}",
        algebra::family_exchange
    ),
    entry!(
        "symmetry-inverse",
        Symmetries,
        "L'_{i,e} and L''_{i,-e} are mutually inverse",
        algebra::symmetry_inverse
    ),
    entry!(
        "symmetry-root-space",
        Symmetries,
        "the symmetries send the alpha-root space to the r_i(alpha)-root space",
        algebra::root_space
    ),
    entry!(
        "symmetry-grading-relation",
        Symmetries,
        "L''_{i,e}(u) = (-1)^n q_i^{en} L'_{i,e}(u) when K_i u K_i^-1 = q_i^n u",
        algebra::grading_relation
    ),
    entry!(
        "varpi-intertwining",
        Symmetries,
        "varpi L'_{i,e} = L''_{i,e} varpi",
        algebra::varpi_intertwining
    ),
    entry!(
        "star-intertwining",
        Symmetries,
        "* L'_{i,e} = L''_{i,-e} *",
        algebra::star_intertwining
    ),
    entry!(
        "involution-squares",
        Symmetries,
        "omega, varpi and * square to the identity",
        algebra::involution_squares
    ),
    entry!(
        "braid-relation-algebra",
        Symmetries,
        "alternating products of m_ij symmetries agree on every generator of U",
        algebra::braid_relation
    ),
    entry!(
        "braid-positivity",
        Symmetries,
        "L_{i_1} ... L_{i_N-1}(a_{i_N}) and L_r(a_jl) lie in U^+ along reduced words",
        algebra::braid_positivity
    ),
    // form
    entry!(
        "f-coproduct",
        Form,
        "rho(f_m) and rho(f'_m) in closed form",
        form::f_coproduct
    ),
    entry!(
        "f-derivations",
        Form,
        "delta^i, delta_i and delta^{j,l} of f_m (and the * mirrors on f'_m)",
        form::f_derivations
    ),
    entry!(
        "divided-derivation-power",
        Form,
        "(delta_i)^n = q_i^{n(n-1)/2} delta_{ni} and the upper twin",
        form::divided_derivation_power
    ),
    entry!(
        "kernel-decomposition",
        Form,
        "U^+ is the direct sum of a_i^t ker delta^i (and the three mirrored decompositions)",
        form::kernel_decomposition
    ),
    entry!(
        "kernel-symmetry-characterization",
        Form,
        "ker delta^i = {x : L''_{i,1}(x) in U^+} and ker delta_i = {x : L'_{i,-1}(x) in U^+}",
        form::kernel_characterization
    ),
    entry!(
        "f-symmetry-exchange",
        Form,
        "L''_{i,1}(f_m) = f'_{l beta - m}, L''_{i,1}(g_m) = g'_{l beta - m} and the inverses",
        form::f_exchange
    ),
    entry!(
        "varpi-f-mirror",
        Form,
        "varpi(f_m) = (-1)^m q_i^{m(l a_ij + m - 1)} g_m and likewise for f'_m",
        form::varpi_mirror
    ),
    entry!(
        "f-pairing-closed-form",
        Form,
        "{g_m, f_m} = tau_jl [l beta choose m]_i",
        form::f_pairing
    ),
    entry!(
        "divided-power-pairing",
        Form,
        "{B_i^(m), a_i^(m)} = q_i^{m(m-1)/2} (q_i^-1 - q_i)^-m / [m]_i!",
        form::divided_power_pairing
    ),
    entry!(
        "f-pairing-invariance",
        Form,
        "{f_m, g_m} = {L''_{i,1} f_m, L''_{i,1} g_m}",
        form::pairing_invariance
    ),
    entry!(
        "mixed-derivation-pairing",
        Form,
        "{g_m y, x} = {g_m, f_m}{y, delta^{(j,l);mi}(x)} and the primed twin",
        form::mixed_pairing
    ),
    entry!(
        "mixed-derivation-product-rule",
        Form,
        "delta^{(j,l);ni}(x x') and delta^{ni;(j,l)}(x x') expanded",
        form::mixed_product_rule
    ),
    entry!(
        "mixed-derivation-kernel-product-rule",
        Form,
        "delta^{(j,l);ni}(x x') has two terms when x' lies in ker delta^i",
        form::mixed_kernel_rule
    ),
    entry!(
        "mixed-derivation-of-f",
        Form,
        "delta^{(j,l);ni}(f_m) = gamma_mn a_i^(m-n) and delta^{ni;(j,l)}(f'_m) = delta_nm",
        form::mixed_of_f
    ),
    entry!(
        "projection-product-rule",
        Form,
        "P_i(x x') = P_i(P_i(x) x')",
        form::projection_product_rule
    ),
    entry!(
        "projection-of-power-product",
        Form,
        "P_i(x a_i^n) through L'_{i,-1} (delta^i)^n L''_{i,1}(x)",
        form::projection_power
    ),
    entry!(
        "symmetry-form-invariance",
        Form,
        "{L''_{i,1}(x), L''_{i,1}(y)} = {x, y} on U^+[i] x U^-[i]",
        form::form_invariance
    ),
    entry!(
        "symmetry-coproduct-projection",
        Form,
        "(P'_i (x) id) rho L''_{i,1} = (L''_{i,1} (x) L''_{i,1})(id (x) P_i) rho on U^+[i]",
        form::coproduct_projection
    ),
    // modules
    entry!(
        "module-category-o",
        Modules,
        "weight decomposition and local nilpotency of real generators",
        module::category_o
    ),
    entry!(
        "module-irreducibility",
        Modules,
        "no vector below the top is killed by every raising generator",
        module::irreducibility
    ),
    entry!(
        "module-commutator-action",
        Modules,
        "a_i B_i - B_i a_i acts on M^n as [n]_i",
        module::commutator_action
    ),
    entry!(
        "module-symmetry-inverse",
        Modules,
        "L'_{i,e} L''_{i,-e} = id on module vectors",
        module::symmetry_inverse
    ),
    entry!(
        "module-weight-reflection",
        Modules,
        "L_i sends M_mu into M_{r_i mu}",
        module::weight_reflection
    ),
    entry!(
        "module-intertwining",
        Modules,
        "L(u z) = L(u) L(z) for the generators u",
        module::intertwining
    ),
    entry!(
        "module-transport",
        Modules,
        "L''_{i,-e}(F_{n,beta n,e} z) = a_jn L''_{i,-e}(z) and the three companions",
        module::transport
    ),
    entry!(
        "module-braid-relation",
        Modules,
        "alternating products of m_ij module symmetries agree",
        module::braid_relation
    ),
];

pub fn registry() -> &'static [Identity] {
    REGISTRY
}

pub fn find(name: &str) -> Option<&'static Identity> {
    REGISTRY.iter().find(|e| e.name == name)
}

/// Which registry entries to run.
#[derive(Clone, Debug, Default)]
pub struct Selection {
    pub suites: Vec<Suite>,
    pub only: Vec<String>,
}

impl Selection {
    pub fn entries(&self) -> Result<Vec<&'static Identity>> {
        for name in &self.only {
            if find(name).is_none() {
                return Err(Error::domain(format!("unknown identity `{name}`")));
            }
        }
        Ok(REGISTRY
            .iter()
            .filter(|e| self.suites.is_empty() || self.suites.contains(&e.suite))
            .filter(|e| self.only.is_empty() || self.only.iter().any(|n| n == e.name))
            .collect())
    }
}

/// Run the selected entries; the result is sorted by identity, then parameters.
pub fn run(engine: &Engine, cfg: &SuiteConfig, sel: &Selection) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for entry in sel.entries()? {
        out.extend(entry.run(engine, cfg)?);
    }
    sort_checks(&mut out);
    Ok(out)
}

/// Outcome of the braid checks for one pair of real indices.
#[derive(Clone, Debug)]
pub struct BraidReport {
    pub order: BraidOrder,
    /// Algebra checks first, then module checks; each part sorted.
    pub checks: Vec<Check>,
    /// Module vectors on which both braid products were compared.
    pub vectors: usize,
}

/// Braid relation for the pair `(i, j)` on the generators of `U` and on the
/// standard irreducible modules. A pair without a braid relation
/// (`a_ij a_ji >= 4`) yields no checks.
pub fn braid_pair(engine: &Engine, cfg: &SuiteConfig, i: usize, j: usize) -> Result<BraidReport> {
    let d = engine.datum();
    d.require_real(i)?;
    d.require_real(j)?;
    if i == j {
        return Err(Error::domain("braid check needs two distinct indices"));
    }
    let order = d.braid_order(i, j)?;
    let BraidOrder::Finite(m) = order else {
        return Ok(BraidReport {
            order,
            checks: Vec::new(),
            vectors: 0,
        });
    };
    let pair = [(i, j, m)];
    let mut checks = algebra::braid_relation_on(engine, cfg, &pair)?;
    sort_checks(&mut checks);
    let (mut on_modules, vectors) = module::braid_relation_on(engine, cfg, &pair)?;
    sort_checks(&mut on_modules);
    checks.extend(on_modules);
    Ok(BraidReport {
        order,
        checks,
        vectors,
    })
}

// ---------------------------------------------------------------------------
// Shared helpers for the suites.

const DETAIL_LIMIT: usize = 600;

pub(crate) fn clip(mut s: String) -> String {
    if s.len() > DETAIL_LIMIT {
        let mut cut = DETAIL_LIMIT;
        while !s.is_char_boundary(cut) {
            cut -= 1;
        }
        s.truncate(cut);
        s.push_str(" ...");
    }
    s
}

pub(crate) fn diff_u(ua: &UAlg, lhs: &UElem, rhs: &UElem) -> Option<String> {
    let d = lhs.sub(rhs);
    (!d.is_zero()).then(|| clip(format!("lhs - rhs = {}", ua.render(&d))))
}

pub(crate) fn diff_p(d: &Datum, lhs: &PElem, rhs: &PElem) -> Option<String> {
    let x = lhs.sub(rhs);
    (!x.is_zero()).then(|| clip(format!("lhs - rhs = {}", uplus::render(d, &x, "a"))))
}

pub(crate) fn diff_s(lhs: &crate::Scalar, rhs: &crate::Scalar) -> Option<String> {
    (lhs != rhs).then(|| format!("lhs = {lhs}, rhs = {rhs}"))
}

/// The label `(j, l)` as `"j,l"` for parameter records.
pub(crate) fn label_param(d: &Datum, lab: Label) -> Value {
    json!(format!("{},{}", d.name(lab.i()), lab.l))
}

pub(crate) fn name(d: &Datum, i: usize) -> Value {
    json!(d.name(i))
}

/// Levels `n` available for `a_jn`: `0..=max_param` for real `j`, up to the
/// level caps for imaginary `j`.
pub(crate) fn levels(d: &Datum, j: usize, cfg: &SuiteConfig) -> Vec<i64> {
    let top = if d.is_real(j) {
        cfg.max_param
    } else {
        cfg.max_level.min(d.max_l(j) as i64)
    };
    (0..=top).collect()
}

/// Every label `(j,l)` with `j != i` and `l` within the level bound.
pub(crate) fn other_labels(d: &Datum, i: usize, cfg: &SuiteConfig) -> Vec<Label> {
    d.labels()
        .into_iter()
        .filter(|lab| lab.i() != i && lab.l() <= cfg.max_level)
        .collect()
}

/// Every label with level within the bound.
pub(crate) fn small_labels(d: &Datum, cfg: &SuiteConfig) -> Vec<Label> {
    d.labels()
        .into_iter()
        .filter(|lab| lab.l() <= cfg.max_level)
        .collect()
}

/// Unordered pairs of real indices with a finite braid order.
pub(crate) fn braid_pairs(d: &Datum) -> Vec<(usize, usize, usize)> {
    let re = d.real_indices();
    let mut out = Vec::new();
    for (a, &i) in re.iter().enumerate() {
        for &j in &re[a + 1..] {
            if let Ok(BraidOrder::Finite(m)) = d.braid_order(i, j) {
                out.push((i, j, m));
            }
        }
    }
    out
}

/// Nonzero degrees of height at most `h`.
pub(crate) fn degrees_up_to(rank: usize, h: usize) -> Vec<RootVec> {
    (1..=h)
        .flat_map(|k| crate::modules::degrees_of_height(rank, k))
        .collect()
}

/// The generators of `U` used for generator-wise checks: `a_{jl}`, `b_{jl}`
/// (level within the bound) and `K_j`.
pub(crate) fn generators(ua: &UAlg, cfg: &SuiteConfig) -> Result<Vec<(String, UElem)>> {
    let d = ua.datum();
    let mut out = Vec::new();
    for lab in small_labels(d, cfg) {
        out.push((format!("a_{{{},{}}}", d.name(lab.i()), lab.l), ua.a(lab)?));
        out.push((format!("b_{{{},{}}}", d.name(lab.i()), lab.l), ua.b(lab)?));
    }
    for k in 0..d.rank() {
        out.push((format!("K_{}", d.name(k)), ua.k_i(k, 1)));
    }
    Ok(out)
}
