//! Reproducibility: equal seeds give byte-identical reports, and the on-disk
//! Gram cache never changes a result.

mod common;

use qbb_core::cartan::RootVec;
use qbb_core::engine::{Engine, EngineConfig};
use qbb_core::identities::{self, Selection, Suite, SuiteConfig};

fn report(e: &Engine, seed: u64, suites: Vec<Suite>, only: &[&str]) -> String {
    let cfg = SuiteConfig {
        seed,
        samples: 20,
        ..SuiteConfig::default()
    };
    let sel = Selection {
        suites,
        only: only.iter().map(|s| s.to_string()).collect(),
    };
    let checks = identities::run(e, &cfg, &sel).unwrap();
    let json: Vec<_> = checks.iter().map(|c| c.to_json()).collect();
    serde_json::to_string_pretty(&json).unwrap()
}

fn cached_engine(file: &str, dir: &std::path::Path) -> Engine {
    Engine::new(
        common::load(file),
        EngineConfig {
            cache_dir: Some(dir.to_path_buf()),
            ..EngineConfig::default()
        },
    )
}

#[test]
fn equal_seeds_give_identical_reports() {
    let only = ["module-intertwining", "module-transport", "primitive-orthogonality"];
    let a = report(&common::engine("a2.json", 8), 11, Vec::new(), &only);
    let b = report(&common::engine("a2.json", 8), 11, Vec::new(), &only);
    assert_eq!(a, b);
    let c = report(&common::engine("real_isotropic.json", 8), 11, vec![Suite::Foundations], &[]);
    let d = report(&common::engine("real_isotropic.json", 8), 11, vec![Suite::Foundations], &[]);
    assert_eq!(c, d);
}

#[test]
fn gram_cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    for file in ["b2.json", "real_hyperbolic.json"] {
        let fresh = common::engine(file, 8);
        let writer = cached_engine(file, dir.path());
        let reader = cached_engine(file, dir.path());
        for h in 1..=4 {
            for beta in qbb_core::modules::degrees_of_height(2, h) {
                let g0 = fresh.free().gram(&beta).unwrap();
                let g1 = writer.free().gram(&beta).unwrap();
                let g2 = reader.free().gram(&beta).unwrap();
                assert_eq!(g0.basis, g1.basis);
                assert_eq!(g0.matrix, g1.matrix);
                assert_eq!(g1.matrix, g2.matrix);
                assert_eq!(g0.rank, g2.rank);
            }
        }
    }
    let written = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with("gram-"))
        .count();
    assert!(written > 0);
}

#[test]
fn cached_and_uncached_suites_agree() {
    let dir = tempfile::tempdir().unwrap();
    let only = ["serre-radical", "primitive-coproduct", "f-pairing-closed-form"];
    let plain = report(&common::engine("real_hyperbolic.json", 10), 0, Vec::new(), &only);
    let first = report(&cached_engine("real_hyperbolic.json", dir.path()), 0, Vec::new(), &only);
    let second = report(&cached_engine("real_hyperbolic.json", dir.path()), 0, Vec::new(), &only);
    assert_eq!(plain, first);
    assert_eq!(first, second);
}

#[test]
fn corrupt_cache_files_are_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let beta = RootVec(vec![2, 1]);
    let expect = cached_engine("a2.json", dir.path()).free().gram(&beta).unwrap().matrix.clone();
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        std::fs::write(entry.unwrap().path(), b"{not json").unwrap();
    }
    let again = cached_engine("a2.json", dir.path()).free().gram(&beta).unwrap();
    assert_eq!(again.matrix, expect);
}
