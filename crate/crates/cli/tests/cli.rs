//! End-to-end runs of the `qbb` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn qbb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbb"))
        .args(args)
        .env_remove("QBB_CACHE_DIR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn primitive_generator_of_an_isotropic_index() {
    let out = qbb(&["primitive", "-d", &data("isotropic1.json"), "--i", "i0", "--l", "2", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("𝚊_{i0,2} = e_{i0,2} − 1/2·e_{i0,1}e_{i0,1}"), "{text}");
    assert!(text.contains("τ_{i0,2} = 1/2"), "{text}");

    let out = qbb(&[
        "primitive", "-d", &data("isotropic1.json"), "--i", "i0", "--l", "2", "--no-cache", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["tau"], "1/2");
}

#[test]
fn braid_check_reports_the_order_and_vector_count() {
    let out = qbb(&["braid-check", "-d", &data("a2.json"), "--pair", "i0,i1", "--no-cache"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("m_ij=3"), "{text}");
    assert!(text.contains("vectors checked, all equal"), "{text}");
}

#[test]
fn serre_check_without_relations_passes_vacuously() {
    let out = qbb(&["serre-check", "-d", &data("a1.json"), "--no-cache"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("vacuous pass"));
}

#[test]
fn serre_check_on_a_mixed_datum_holds() {
    let out = qbb(&["serre-check", "-d", &data("real_isotropic.json"), "--no-cache"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains(" 0 fail, 0 inconclusive"));
}

#[test]
fn invalid_datum_names_the_invariant_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"indices":[{"name":"i","a_ii":1,"s":1}]}"#).unwrap();
    let out = qbb(&["serre-check", "-d", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even-diagonal"));
}

#[test]
fn exhausted_budget_is_inconclusive_with_exit_two() {
    let out = qbb(&[
        "identity-suite", "-d", &data("a2.json"), "--only", "serre-radical", "--budget", "3", "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rerun with"));
}

#[test]
fn json_reports_are_byte_identical_for_equal_seeds() {
    let args = [
        "identity-suite", "-d", &data("a2.json"), "--only", "module-intertwining,primitive-orthogonality",
        "--samples", "10", "--seed", "9", "--format", "json", "--no-cache",
    ];
    let a = qbb(&args);
    let b = qbb(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().all(|r| r["holds"] == true));
}

#[test]
fn cache_directory_is_filled_inspected_and_cleared() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_qbb"))
            .args(args)
            .env("QBB_CACHE_DIR", d)
            .output()
            .unwrap()
    };
    let cold = run(&["gram", "-d", &data("b2.json"), "--degree", "i0:2,i1:2"]);
    assert_eq!(cold.status.code(), Some(0));
    let files = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(files > 0);
    let warm = run(&["gram", "-d", &data("b2.json"), "--degree", "i0:2,i1:2"]);
    assert_eq!(cold.stdout, warm.stdout);
    let plain = qbb(&["gram", "-d", &data("b2.json"), "--degree", "i0:2,i1:2", "--no-cache"]);
    assert_eq!(cold.stdout, plain.stdout);

    let inspect = run(&["cache", "inspect"]);
    assert_eq!(inspect.status.code(), Some(0));
    assert!(!inspect.stdout.is_empty());
    let clear = run(&["cache", "clear"]);
    assert_eq!(clear.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn module_character_of_the_adjoint_representation() {
    let out = qbb(&[
        "module", "-d", &data("a2.json"), "--weight", "i0=1,i1=1", "--format", "json", "--no-cache",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 8);
    assert_eq!(v["complete"], true);
}
