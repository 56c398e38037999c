//! Borcherds-Cartan data: validation, reflections and braid orders.

mod common;

use proptest::prelude::*;
use qbb_core::cartan::{BraidOrder, Coweight, Datum, IndexKind, RootVec, Weight};
use qbb_core::Error;

fn invariant_of(json: &str) -> &'static str {
    match Datum::from_json(json) {
        Err(Error::Datum { invariant, .. }) => invariant,
        other => panic!("expected a datum error, got {other:?}"),
    }
}

#[test]
fn invalid_data_name_the_violated_invariant() {
    assert_eq!(invariant_of(r#"{"indices":[]}"#), "nonempty-index-set");
    assert_eq!(
        invariant_of(r#"{"indices":[{"name":"i","a_ii":2,"s":1},{"name":"i","a_ii":2,"s":1}]}"#),
        "distinct-index-names"
    );
    assert_eq!(
        invariant_of(r#"{"indices":[{"name":"i","a_ii":2,"s":0}]}"#),
        "positive-symmetrizer"
    );
    assert_eq!(
        invariant_of(r#"{"indices":[{"name":"i","a_ii":1,"s":1}]}"#),
        "even-diagonal"
    );
    assert_eq!(
        invariant_of(
            r#"{"indices":[{"name":"i","a_ii":2,"s":1},{"name":"j","a_ii":2,"s":1}],
                "a_off_diag":[["i","j",1]]}"#
        ),
        "nonpositive-off-diagonal"
    );
    // s_i a_ij = s_j a_ji fails for (1)(-2) vs (1)(-1).
    assert_eq!(
        invariant_of(
            r#"{"indices":[{"name":"i","a_ii":2,"s":1},{"name":"j","a_ii":2,"s":1}],
                "a_off_diag":[["i","j",-2],["j","i",-1]]}"#
        ),
        "symmetrizable"
    );
    assert_eq!(
        invariant_of(r#"{"indices":[{"name":"i","a_ii":0,"s":1}],"nu":[["i",1,"0"]]}"#),
        "nonzero-nu"
    );
}

#[test]
fn missing_transposed_entries_are_inferred_from_symmetrizability() {
    let d = Datum::from_json(
        r#"{"indices":[{"name":"i","a_ii":2,"s":2},{"name":"j","a_ii":2,"s":1}],
            "a_off_diag":[["i","j",-1]]}"#,
    )
    .unwrap();
    assert_eq!(d.a(1, 0), -2);
    assert_eq!(d.braid_order(0, 1).unwrap(), BraidOrder::Finite(4));
}

#[test]
fn indices_are_classified_by_their_diagonal_entry() {
    let d = common::load("mixed_rank3.json");
    assert_eq!(d.classify(0), IndexKind::Real);
    assert_eq!(d.classify(2), IndexKind::Isotropic);
    assert_eq!(d.real_indices(), vec![0, 1]);
    assert_eq!(d.imaginary_indices(), vec![2]);
    // Real generators have level 1 only; imaginary ones go up to max_l.
    assert_eq!(d.max_l(0), 1);
    assert_eq!(d.max_l(2), 2);
}

#[test]
fn braid_orders_follow_the_product_of_cartan_entries() {
    let cases = [
        ("a1xa1.json", 2),
        ("a2.json", 3),
        ("b2.json", 4),
        ("g2.json", 6),
    ];
    for (file, m) in cases {
        let d = common::load(file);
        assert_eq!(d.braid_order(0, 1).unwrap(), BraidOrder::Finite(m), "{file}");
    }
    let hyperbolic = Datum::from_matrix(&[vec![2, -3], vec![-2, 2]], &[2, 3], 1).unwrap();
    assert_eq!(hyperbolic.braid_order(0, 1).unwrap(), BraidOrder::Infinite);
    let mixed = common::load("real_isotropic.json");
    assert!(mixed.braid_order(0, 1).is_err());
}

#[test]
fn alternating_words_are_reduced_exactly_up_to_the_braid_order() {
    for (file, m) in [("a1xa1.json", 2), ("a2.json", 3), ("b2.json", 4), ("g2.json", 6)] {
        let d = common::load(file);
        let word = |n: usize| (0..n).map(|k| k % 2).collect::<Vec<_>>();
        assert!(d.is_reduced(&word(m)).unwrap(), "{file}: length {m}");
        assert!(!d.is_reduced(&word(m + 1)).unwrap(), "{file}: length {}", m + 1);
    }
}

fn data() -> Vec<Datum> {
    ["a2.json", "b2.json", "g2.json", "real_isotropic.json", "real_hyperbolic.json", "mixed_rank3.json"]
        .iter()
        .map(|f| common::load(f))
        .collect()
}

proptest! {
    #[test]
    fn reflections_are_involutions_preserving_the_pairing(
        pick in 0usize..6,
        b in prop::collection::vec(-4i64..=4, 3),
        g in prop::collection::vec(-4i64..=4, 3),
        h in prop::collection::vec(-4i64..=4, 3),
    ) {
        let d = &data()[pick];
        let r = d.rank();
        let (b, g) = (RootVec(b[..r].to_vec()), RootVec(g[..r].to_vec()));
        let w = Weight { h_values: h[..r].to_vec(), d_values: vec![0; r] };
        for i in d.real_indices() {
            let rb = d.reflect_root(i, &b).unwrap();
            prop_assert_eq!(d.reflect_root(i, &rb).unwrap(), b.clone());
            prop_assert_eq!(
                d.root_pairing(&rb, &d.reflect_root(i, &g).unwrap()),
                d.root_pairing(&b, &g)
            );
            prop_assert_eq!(d.reflect(i, &d.reflect(i, &w).unwrap()).unwrap(), w.clone());
            // The simple root alpha_i goes to -alpha_i.
            prop_assert_eq!(
                d.reflect_root(i, &RootVec::simple(r, i, 1)).unwrap(),
                RootVec::simple(r, i, -1)
            );
        }
    }

    #[test]
    fn reflecting_weights_and_coweights_is_dual(
        pick in 0usize..6,
        h in prop::collection::vec(-4i64..=4, 3),
        c in prop::collection::vec(-3i64..=3, 3),
    ) {
        let d = &data()[pick];
        let r = d.rank();
        let w = Weight { h_values: h[..r].to_vec(), d_values: vec![0; r] };
        let mut cw = Coweight::zero(r);
        for (i, &k) in c[..r].iter().enumerate() {
            cw = cw.add_coroot(i, k);
        }
        for i in d.real_indices() {
            prop_assert_eq!(
                d.reflect(i, &w).unwrap().eval(&cw),
                w.eval(&d.reflect_coweight(i, &cw).unwrap())
            );
        }
    }
}

#[test]
fn reflections_refuse_imaginary_indices() {
    let d = common::load("real_isotropic.json");
    assert!(d.reflect_root(1, &RootVec::simple(2, 1, 1)).is_err());
}
