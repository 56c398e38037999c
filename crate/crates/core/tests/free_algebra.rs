//! The free algebra and its form: Gram tables against the recursive oracle,
//! hand-computed values, Serre elements and the registered properties.

mod common;

use common::{int, q, FormOracle};
use proptest::prelude::*;
use qbb_core::cartan::{Label, RootVec};
use qbb_core::freealg::{self, FreeElem};
use qbb_core::identities::{self, Selection, SuiteConfig};
use qbb_core::modules::degrees_of_height;
use qbb_core::report::Status;
use qbb_core::Lin;

const DATA: [&str; 7] = [
    "a2.json",
    "b2.json",
    "g2.json",
    "real_isotropic.json",
    "real_hyperbolic.json",
    "isotropic1.json",
    "hyperbolic1.json",
];

#[test]
fn gram_tables_match_the_defining_recursion() {
    for file in DATA {
        let e = common::engine(file, 8);
        let d = e.datum();
        let mut oracle = FormOracle::new(d);
        let top = if d.rank() == 1 { 5 } else { 4 };
        for h in 1..=top {
            for beta in degrees_of_height(d.rank(), h) {
                let g = e.free().gram(&beta).unwrap();
                for (a, wa) in g.basis.iter().enumerate() {
                    for (b, wb) in g.basis.iter().enumerate() {
                        assert_eq!(
                            g.matrix[a][b],
                            oracle.form(wa, wb),
                            "{file}: {{{wa:?}, {wb:?}}}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn small_gram_values_computed_by_hand() {
    // {e_i e_j, e_j e_i} = q^{(alpha_i, alpha_j)} for real i, j with nu = 1.
    let e = common::engine("a2.json", 8);
    let g = e.free().gram(&RootVec(vec![1, 1])).unwrap();
    let (ij, ji) = (vec![Label::new(0, 1), Label::new(1, 1)], vec![Label::new(1, 1), Label::new(0, 1)]);
    let pos = |w: &Vec<Label>| g.basis.iter().position(|x| x == w).unwrap();
    assert_eq!(g.matrix[pos(&ij)][pos(&ji)], q(-1));
    assert_eq!(g.matrix[pos(&ij)][pos(&ij)], int(1));
    // {e_i e_i, e_i e_i} = 1 + q^{(alpha_i, alpha_i)}: the twist of (1 (x) e_i)(e_i (x) 1).
    let g = e.free().gram(&RootVec(vec![2, 0])).unwrap();
    assert_eq!(g.matrix[0][0], &int(1) + &q(2));

    // Isotropic rank one: {e_2, e_1 e_1} = {e_1, e_1}^2 = 1 and {e_1e_1, e_1e_1} = 2.
    let e = common::engine("isotropic1.json", 8);
    let g = e.free().gram(&RootVec(vec![2])).unwrap();
    let pos = |w: &[Label]| g.basis.iter().position(|x| x == w).unwrap();
    let (e2, e11) = (vec![Label::new(0, 2)], vec![Label::new(0, 1), Label::new(0, 1)]);
    assert_eq!(g.matrix[pos(&e2)][pos(&e11)], int(1));
    assert_eq!(g.matrix[pos(&e11)][pos(&e11)], int(2));
}

fn word_strategy(rank: usize, max_l: usize) -> impl Strategy<Value = Vec<Label>> {
    prop::collection::vec((0..rank, 1..=max_l), 1..4)
        .prop_map(|v| v.into_iter().map(|(i, l)| Label::new(i, l)).collect())
}

fn elem(words: Vec<(Vec<Label>, i64, i64)>) -> FreeElem {
    let mut x = Lin::zero();
    for (w, c, k) in words {
        x.add_term(w, &int(c) * &q(k));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn form_is_symmetric_and_agrees_with_the_oracle(
        xs in prop::collection::vec((word_strategy(2, 2), -2i64..=2, -2i64..=2), 1..4),
        ys in prop::collection::vec((word_strategy(2, 2), -2i64..=2, -2i64..=2), 1..4),
    ) {
        let e = common::engine("real_hyperbolic.json", 8);
        let d = e.datum();
        // Real index 0 has level 1 only.
        let fix = |v: Vec<(Vec<Label>, i64, i64)>| -> Vec<(Vec<Label>, i64, i64)> {
            v.into_iter()
                .map(|(w, c, k)| (w.into_iter().map(|l| if l.i() == 0 { Label::new(0, 1) } else { l }).collect(), c, k))
                .collect()
        };
        let (x, y) = (elem(fix(xs)), elem(fix(ys)));
        let fa = e.free();
        prop_assert_eq!(fa.form(&x, &y), fa.form(&y, &x));
        let mut oracle = FormOracle::new(d);
        let xv: Vec<_> = x.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        let yv: Vec<_> = y.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
        prop_assert_eq!(fa.form(&x, &y), oracle.form_elems(&xv, &yv));
    }
}

#[test]
fn serre_elements_pair_to_zero_with_every_monomial() {
    let e = common::engine("real_hyperbolic.json", 8);
    let d = e.datum();
    let mut oracle = FormOracle::new(d);
    // i real, j imaginary with a_ij = -1: m > n.
    for (n, comp) in [(1, vec![1]), (2, vec![2]), (2, vec![1, 1])] {
        for sign in [1, -1] {
            let m = n + 1;
            let x = e.free().serre_element(0, 1, n, m, &comp, sign).unwrap();
            assert!(e.free().radical_member(&x).unwrap());
            let degree = vec![m, n];
            let xv: Vec<_> = x.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
            for w in common::words_of_degree(d, &degree) {
                assert!(oracle.form_elems(&xv, &[(w, int(1))]).is_zero());
            }
        }
    }
    // At m = -a_ij n the element is outside the hypothesis and refused.
    assert!(e.free().serre_element(0, 1, 1, 1, &[1], 1).is_err());
    let y = freealg::multiply(&freealg::generator(Label::new(0, 1)), &freealg::generator(Label::new(1, 1)));
    assert!(!e.free().radical_member(&y).unwrap());
}

#[test]
fn registered_free_algebra_properties_hold() {
    let only = [
        "serre-radical",
        "radical-ideal",
        "form-symmetry",
        "coproduct-coassociativity",
        "form-coproduct-adjunction",
    ];
    for file in ["a2.json", "b2.json", "real_isotropic.json", "real_hyperbolic.json", "hyperbolic1.json"] {
        let e = common::engine(file, 8);
        let sel = Selection {
            suites: Vec::new(),
            only: only.iter().map(|s| s.to_string()).collect(),
        };
        let checks = identities::run(&e, &SuiteConfig::default(), &sel).unwrap();
        for c in &checks {
            assert_eq!(c.status, Status::Holds, "{file}: {}", c.text_line());
        }
    }
}

#[test]
fn gram_budget_is_reported_not_truncated() {
    let e = qbb_core::engine::Engine::new(
        common::load("a2.json"),
        qbb_core::engine::EngineConfig {
            height_budget: 3,
            no_cache: true,
            ..Default::default()
        },
    );
    let err = e.free().gram(&RootVec(vec![2, 2])).unwrap_err();
    assert!(err.is_inconclusive(), "{err}");
}
