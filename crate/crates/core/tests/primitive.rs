//! Primitive generators against a brute-force orthogonalization of the
//! recursive form, and their defining properties.

mod common;

use std::time::Instant;

use common::{brute_force_primitive, comp_word, compositions_below, int, FormOracle, Word};
use qbb_core::cartan::{Datum, Label};
use qbb_core::engine::{Engine, EngineConfig};
use qbb_core::Scalar;

fn as_pairs(x: &qbb_core::freealg::FreeElem) -> Vec<(Word, Scalar)> {
    x.iter().map(|(w, c)| (w.clone(), c.clone())).collect()
}

/// The engine's generator agrees with the oracle modulo the radical and has
/// the same tau.
fn assert_matches_oracle(e: &Engine, i: usize, l: i64) {
    let d = e.datum();
    let mut oracle = FormOracle::new(d);
    let expect = brute_force_primitive(&mut oracle, i, l);
    let p = e.prims().get(Label::new(i, l as usize)).unwrap();
    let got = as_pairs(&p.element);
    let mut diff = got.clone();
    diff.extend(expect.iter().map(|(w, c)| (w.clone(), -c)));
    let mut degree = vec![0; d.rank()];
    degree[i] = l;
    for w in common::words_of_degree(d, &degree) {
        assert!(
            oracle.form_elems(&diff, &[(w.clone(), int(1))]).is_zero(),
            "({i},{l}): engine and oracle differ outside the radical on {w:?}"
        );
    }
    assert_eq!(p.tau, oracle.form_elems(&expect, &expect), "tau of ({i},{l})");
    assert_eq!(p.tau, oracle.form_elems(&got, &got), "tau of ({i},{l})");
}

#[test]
fn isotropic_level_two_generator_is_exact() {
    let start = Instant::now();
    let e = common::engine("isotropic1.json", 8);
    let p = e.prims().get(Label::new(0, 2)).unwrap();
    let e2 = vec![Label::new(0, 2)];
    let e11 = vec![Label::new(0, 1), Label::new(0, 1)];
    assert_eq!(p.element.len(), 2);
    assert_eq!(p.element.coeff(&e2), int(1));
    assert_eq!(p.element.coeff(&e11), Scalar::ratio(-1, 2));
    assert_eq!(p.tau, Scalar::ratio(1, 2));
    assert_matches_oracle(&e, 0, 3);
    assert!(start.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn generators_match_the_oracle_up_to_level_three() {
    for file in ["isotropic1.json", "hyperbolic1.json"] {
        let e = common::engine(file, 8);
        for l in 1..=3 {
            assert_matches_oracle(&e, 0, l);
        }
    }
    let e = common::engine("real_hyperbolic.json", 8);
    for l in 1..=2 {
        assert_matches_oracle(&e, 1, l);
    }
}

#[test]
fn non_trivial_nu_changes_the_generator_consistently() {
    let d = Datum::from_json(
        r#"{"indices":[{"name":"i","a_ii":-2,"s":1}],"max_l":3,
            "nu":[["i",1,"1+q^-1"],["i",2,"1+2*q^-3"]]}"#,
    )
    .unwrap();
    let e = Engine::new(
        d,
        EngineConfig {
            no_cache: true,
            ..EngineConfig::default()
        },
    );
    for l in 1..=3 {
        assert_matches_oracle(&e, 0, l);
    }
}

#[test]
fn generators_have_the_defining_properties() {
    for (file, i, top) in [("isotropic1.json", 0, 3), ("hyperbolic1.json", 0, 3), ("real_hyperbolic.json", 1, 2)] {
        let e = common::engine(file, 8);
        let d = e.datum();
        let mut oracle = FormOracle::new(d);
        for l in 1..=top {
            let lab = Label::new(i, l as usize);
            let p = e.prims().get(lab).unwrap();
            // Leading term e_il with coefficient 1; every other letter has a lower level.
            assert_eq!(p.element.coeff(&vec![lab]), int(1));
            for (w, _) in p.element.iter() {
                assert!(w == &vec![lab] || w.iter().all(|x| x.i() == i && x.l() < l));
            }
            // Primitive coproduct: {a, x y} = 0 whenever x and y have positive degree.
            let a = as_pairs(&p.element);
            let mut degree = vec![0; d.rank()];
            degree[i] = l;
            for w in common::words_of_degree(d, &degree).into_iter().filter(|w| w.len() >= 2) {
                assert!(oracle.form_elems(&a, &[(w, int(1))]).is_zero());
            }
        }
        // Spanning: products of primitive generators along compositions have the
        // same Gram rank as the monomials e_{i,c}.
        for n in 1..=top {
            let comps = compositions_below(n, n + 1);
            let monomials: Vec<Vec<(Word, Scalar)>> =
                comps.iter().map(|c| vec![(comp_word(i, c), int(1))]).collect();
            let products: Vec<Vec<(Word, Scalar)>> = comps
                .iter()
                .map(|c| {
                    let x = e.prims().composition_product(i, c).unwrap();
                    as_pairs(&x)
                })
                .collect();
            let gram = |v: &[Vec<(Word, Scalar)>], o: &mut FormOracle| -> Vec<Vec<Scalar>> {
                v.iter().map(|x| v.iter().map(|y| o.form_elems(x, y)).collect()).collect()
            };
            let rm = common::rank(&gram(&monomials, &mut oracle));
            let rp = common::rank(&gram(&products, &mut oracle));
            assert_eq!(rm, rp, "{file}: spanning in degree {n}");
        }
    }
}

#[test]
fn real_generators_are_their_letters() {
    let e = common::engine("a2.json", 8);
    let p = e.prims().get(Label::new(0, 1)).unwrap();
    assert_eq!(p.element.len(), 1);
    // tau_i = {e_i, e_i} = nu_i = 1.
    assert_eq!(p.tau, int(1));
    assert!(e.prims().get(Label::new(0, 2)).is_err());
}
