//! Highest-weight modules: dimensions against the Weyl dimension formula,
//! Weyl-group symmetry of characters, the action of the defining relations
//! and the symmetries on seeded sample vectors.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use qbb_core::cartan::{Datum, Weight};
use qbb_core::engine::Engine;
use qbb_core::identities::{self, Selection, SuiteConfig};
use qbb_core::modules::{HWModule, ModuleKind};
use qbb_core::report::Status;
use qbb_core::symmetries::{self, reflects_weights};
use qbb_core::ualg::{SymOp, Variant};

/// Positive roots of a finite-type datum as the orbit of the simple roots.
fn positive_roots(d: &Datum) -> Vec<Vec<i64>> {
    let n = d.rank();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut todo: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    while let Some(b) = todo.pop() {
        if !seen.insert(b.clone()) {
            continue;
        }
        for i in 0..n {
            // s_i(beta) = beta - <beta, alpha_i^vee> alpha_i, <alpha_j, alpha_i^vee> = a_ij.
            let pair: i64 = (0..n).map(|j| b[j] * d.a(i, j)).sum();
            let mut r = b.clone();
            r[i] -= pair;
            if r.iter().all(|&c| c >= 0) && r.iter().any(|&c| c > 0) {
                todo.push(r);
            }
        }
    }
    seen.into_iter().collect()
}

/// `prod_{alpha > 0} (lambda + rho, alpha) / (rho, alpha)`.
fn weyl_dimension(d: &Datum, lambda: &[i64]) -> BigRational {
    let mut out = common::one_rat();
    for alpha in positive_roots(d) {
        let num: i64 = (0..d.rank()).map(|j| alpha[j] * d.s(j) * (lambda[j] + 1)).sum();
        let den: i64 = (0..d.rank()).map(|j| alpha[j] * d.s(j)).sum();
        out *= common::rat(num, den);
    }
    out
}

fn weight(h: &[i64]) -> Weight {
    Weight {
        h_values: h.to_vec(),
        d_values: vec![0; h.len()],
    }
}

fn build(e: &Engine, h: &[i64], depth: usize) -> HWModule {
    HWModule::build(e.ualg().clone(), weight(h), depth, ModuleKind::Irreducible).unwrap()
}

#[test]
fn finite_type_dimensions_match_the_weyl_formula() {
    let cases: [(&str, &[&[i64]], usize); 4] = [
        ("a2.json", &[&[1, 0], &[0, 1], &[1, 1], &[2, 0]], 6),
        ("a1xa1.json", &[&[1, 0], &[1, 1], &[2, 1]], 6),
        ("b2.json", &[&[1, 0], &[0, 1], &[1, 1]], 8),
        ("g2.json", &[&[1, 0], &[0, 1]], 12),
    ];
    for (file, weights, depth) in cases {
        let e = common::engine(file, 8);
        let d = e.datum();
        assert_eq!(positive_roots(d).len(), d.braid_order(0, 1).map(|m| match m {
            qbb_core::cartan::BraidOrder::Finite(k) => k,
            _ => unreachable!(),
        }).unwrap());
        for h in weights {
            let m = build(&e, h, depth);
            assert_eq!(m.dims_by_height().last(), Some(&0), "{file} {h:?}: depth too small");
            let expect = weyl_dimension(d, h);
            assert_eq!(BigRational::from_integer(m.dim().into()), expect, "{file} {h:?}");
            assert!(m.verify_simple().unwrap());
        }
    }
}

#[test]
fn characters_are_invariant_under_reflections() {
    for (file, h) in [("b2.json", [1, 1]), ("g2.json", [0, 1]), ("a2.json", [2, 1])] {
        let e = common::engine(file, 8);
        let d = e.datum();
        let m = build(&e, &h, 12);
        let chars: BTreeMap<Vec<i64>, usize> = m.character().into_iter().collect();
        for (mu, dim) in &chars {
            for i in 0..2 {
                let r = d.reflect(i, &weight(mu)).unwrap();
                assert_eq!(chars.get(&r.h_values), Some(dim), "{file}: s_{i} of {mu:?}");
            }
        }
    }
}

#[test]
fn generators_act_by_the_defining_commutator() {
    for (file, h) in [("a2.json", [1, 1]), ("real_isotropic.json", [1, 0]), ("real_hyperbolic.json", [1, 1])] {
        let e = common::engine(file, 8);
        let d = e.datum().clone();
        let m = build(&e, &h, 4);
        for (beta, k) in m.basis() {
            let v = m.basis_vec(&beta, k);
            let fits = |lab: &qbb_core::cartan::Label| beta.height() + lab.l() <= m.depth() as i64;
            for &lab in m.labels().iter().filter(|l| fits(l)) {
                let tau = e.uplus().tau(lab).unwrap();
                let ab = m.act_a(lab, &m.act_b(lab, &v).unwrap()).unwrap();
                let ba = m.act_b(lab, &m.act_a(lab, &v).unwrap()).unwrap();
                let kk = m
                    .act_k(&d.k_power(lab.i(), -lab.l()), &v)
                    .sub(&m.act_k(&d.k_power(lab.i(), lab.l()), &v))
                    .scale(&tau);
                assert_eq!(ab.sub(&ba), kk, "{file}: [a, b] for {lab:?} at {beta:?}");
                for &other in m.labels().iter().filter(|&&o| o != lab && fits(&o)) {
                    let ab = m.act_a(lab, &m.act_b(other, &v).unwrap()).unwrap();
                    let ba = m.act_b(other, &m.act_a(lab, &v).unwrap()).unwrap();
                    assert_eq!(ab, ba, "{file}: [a_{lab:?}, b_{other:?}] at {beta:?}");
                }
            }
        }
    }
}

#[test]
fn the_top_vector_is_killed_by_raising_and_real_lowering_is_nilpotent() {
    let e = common::engine("real_isotropic.json", 8);
    let m = build(&e, &[2, 1], 5);
    for &lab in m.labels() {
        assert!(m.act_a(lab, &m.top()).unwrap().is_zero());
    }
    // B_i^{lambda(h_i)+1} kills the highest-weight vector.
    assert_eq!(m.lower_nilpotency(0, &m.top()).unwrap(), 3);
}

#[test]
fn symmetries_reflect_weight_spaces_and_invert_each_other() {
    let e = common::engine("b2.json", 8);
    let m = build(&e, &[1, 1], 8);
    for z in symmetries::sample_vectors(&m, 20, 7) {
        for i in 0..2 {
            for sign in [1, -1] {
                let op = SymOp::new(Variant::Lp, i, sign).unwrap();
                assert!(reflects_weights(&m, op, &z).unwrap());
                let back = symmetries::apply_module(
                    &m,
                    op.inverse(),
                    &symmetries::apply_module(&m, op, &z).unwrap(),
                )
                .unwrap();
                assert_eq!(back, z);
            }
        }
    }
}

#[test]
fn samples_are_reproducible_from_the_seed() {
    let e = common::engine("a2.json", 8);
    let m = build(&e, &[1, 1], 6);
    assert_eq!(symmetries::sample_vectors(&m, 50, 3), symmetries::sample_vectors(&m, 50, 3));
    assert_ne!(symmetries::sample_vectors(&m, 50, 3), symmetries::sample_vectors(&m, 50, 4));
}

#[test]
fn truncated_imaginary_levels_are_reported() {
    let e = common::engine("real_isotropic.json", 8);
    let m = build(&e, &[1, 0], 4);
    assert!(m.warnings().iter().any(|w| w.contains("capped at level 2")));
    assert!(build(&e, &[1, 0], 2).warnings().is_empty());
    // Non-dominant weights are refused for simple modules.
    assert!(HWModule::build(e.ualg().clone(), weight(&[-1, 0]), 3, ModuleKind::Irreducible).is_err());
}

#[test]
fn registered_module_properties_hold() {
    let only = [
        "module-category-o",
        "module-irreducibility",
        "module-commutator-action",
        "module-symmetry-inverse",
        "module-weight-reflection",
        "module-intertwining",
        "module-transport",
    ];
    for file in ["a2.json", "real_isotropic.json"] {
        let e = common::engine(file, 10);
        let sel = Selection {
            suites: Vec::new(),
            only: only.iter().map(|s| s.to_string()).collect(),
        };
        let checks = identities::run(&e, &SuiteConfig::default(), &sel).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert_eq!(c.status, Status::Holds, "{file}: {}", c.text_line());
        }
    }
}
