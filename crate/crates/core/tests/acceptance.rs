//! Acceptance run: one PASS/FAIL line per criterion, every comparison exact.
//!
//! Runs without the libtest harness so that the lines are printed as they are
//! produced; the process exits non-zero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{brute_force_primitive, int, FormOracle};
use qbb_core::cartan::{Datum, Label, RootVec};
use qbb_core::engine::{Engine, EngineConfig};
use qbb_core::identities::{self, Selection, Suite, SuiteConfig};
use qbb_core::report::{Check, Status};
use qbb_core::Scalar;

type Verdict = std::result::Result<String, String>;

/// Counts of a list of records; an empty list or any non-holding record fails.
fn all_hold(what: &str, checks: &[Check]) -> Verdict {
    if checks.is_empty() {
        return Err(format!("{what}: no records produced"));
    }
    if let Some(bad) = checks.iter().find(|c| c.status != Status::Holds) {
        let line: String = bad.text_line().chars().take(300).collect();
        let bad_count = checks.iter().filter(|c| c.status != Status::Holds).count();
        return Err(format!("{what}: {bad_count} record(s) not holding, first: {line}"));
    }
    Ok(format!("{what}: {}", checks.len()))
}

fn select(suites: &[Suite], only: &[&str]) -> Selection {
    Selection {
        suites: suites.to_vec(),
        only: only.iter().map(|s| s.to_string()).collect(),
    }
}

fn run_sel(e: &Engine, cfg: &SuiteConfig, sel: &Selection) -> std::result::Result<Vec<Check>, String> {
    identities::run(e, cfg, sel).map_err(|err| err.to_string())
}

fn engine_from(d: Datum, window: usize) -> Engine {
    Engine::new(
        d,
        EngineConfig {
            window,
            no_cache: true,
            ..EngineConfig::default()
        },
    )
}

fn within(start: Instant, limit: Duration) -> Verdict {
    let t = start.elapsed();
    if t < limit {
        Ok(format!("{:.1} s < {} s", t.as_secs_f64(), limit.as_secs()))
    } else {
        Err(format!("took {:.1} s, limit {} s", t.as_secs_f64(), limit.as_secs()))
    }
}

fn pairs(x: &qbb_core::freealg::FreeElem) -> Vec<(common::Word, Scalar)> {
    x.iter().map(|(w, c)| (w.clone(), c.clone())).collect()
}

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let e = common::engine("isotropic1.json", 8);
    let p = e.prims().get(Label::new(0, 2)).map_err(|x| x.to_string())?;
    let e2 = vec![Label::new(0, 2)];
    let e11 = vec![Label::new(0, 1), Label::new(0, 1)];
    if p.element.len() != 2
        || p.element.coeff(&e2) != int(1)
        || p.element.coeff(&e11) != Scalar::ratio(-1, 2)
    {
        return Err(format!("a_(i,2) = {}", qbb_core::freealg::render(e.datum(), &p.element, "e")));
    }
    if p.tau != Scalar::ratio(1, 2) {
        return Err(format!("tau_(i,2) = {}", p.tau));
    }
    let mut oracle = FormOracle::new(e.datum());
    for l in 1..=3i64 {
        let expect = brute_force_primitive(&mut oracle, 0, l);
        let p = e.prims().get(Label::new(0, l as usize)).map_err(|x| x.to_string())?;
        let mut diff = pairs(&p.element);
        diff.extend(expect.iter().map(|(w, c)| (w.clone(), -c)));
        for w in common::words_of_degree(e.datum(), &[l]) {
            if !oracle.form_elems(&diff, &[(w.clone(), int(1))]).is_zero() {
                return Err(format!("level {l}: differs from the oracle on {w:?}"));
            }
        }
        if p.tau != oracle.form_elems(&expect, &expect) {
            return Err(format!("level {l}: tau differs from the oracle"));
        }
    }
    let time = within(start, Duration::from_secs(1))?;
    Ok(format!("a_(i,2) = e_(i,2) - 1/2 e_(i,1)^2, tau = 1/2; levels 1..3 match the oracle; {time}"))
}

fn criterion_2() -> Verdict {
    let start = Instant::now();
    let mut data: Vec<(String, Datum)> = ["a2.json", "b2.json", "real_isotropic.json", "real_hyperbolic.json"]
        .iter()
        .map(|f| (f.to_string(), common::load(f)))
        .collect();
    for (tag, a_jj) in [("a_ij=-2 isotropic", 0), ("a_ij=-2 hyperbolic", -2)] {
        let d = Datum::from_matrix(&[vec![2, -2], vec![-2, a_jj]], &[1, 1], 2).map_err(|x| x.to_string())?;
        data.push((tag.to_string(), d));
    }
    let cfg = SuiteConfig {
        max_height: 6,
        max_level: 2,
        ..SuiteConfig::default()
    };
    let mut records = 0;
    let mut elements = 0;
    for (tag, d) in data {
        let e = engine_from(d, 8);
        let d = e.datum();
        all_hold(&tag, &run_sel(&e, &cfg, &select(&[], &["serre-radical"]))?)?;
        records += 1;
        // Independent confirmation: pair every Serre element with every
        // monomial of its degree through the recursive form.
        let mut oracle = FormOracle::new(d);
        for i in d.real_indices() {
            for j in (0..d.rank()).filter(|&j| j != i) {
                let a_ij = d.a(i, j);
                if a_ij != -1 && a_ij != -2 {
                    continue;
                }
                let middles: Vec<(i64, Vec<i64>)> = if d.is_real(j) {
                    (1..=3).map(|n| (n, Vec::new())).collect()
                } else {
                    (1..=2)
                        .flat_map(|n| common::compositions_below(n, 3).into_iter().map(move |c| (n, c)))
                        .collect()
                };
                for (n, comp) in middles {
                    for m in (-a_ij * n + 1)..=(6 - n) {
                        for sign in [1, -1] {
                            let x = e
                                .free()
                                .serre_element(i, j, n, m, &comp, sign)
                                .map_err(|x| x.to_string())?;
                            let mut degree = vec![0; d.rank()];
                            degree[i] = m;
                            degree[j] = n;
                            let xv = pairs(&x);
                            for w in common::words_of_degree(d, &degree) {
                                if !oracle.form_elems(&xv, &[(w.clone(), int(1))]).is_zero() {
                                    return Err(format!(
                                        "{tag}: Serre element (i={i}, j={j}, n={n}, m={m}, {comp:?}) pairs with {w:?}"
                                    ));
                                }
                            }
                            elements += 1;
                        }
                    }
                }
            }
        }
    }
    let time = within(start, Duration::from_secs(120))?;
    Ok(format!("{records} data, {elements} Serre elements orthogonal to every monomial; {time}"))
}

fn criterion_3() -> Verdict {
    let mut n = 0;
    for file in ["a2.json", "b2.json", "g2.json", "real_isotropic.json", "real_hyperbolic.json"] {
        let e = common::engine(file, 10);
        let cfg = SuiteConfig {
            max_lbeta: 4,
            max_param: 4,
            ..SuiteConfig::default()
        };
        let checks = run_sel(&e, &cfg, &select(&[], &["f-pairing-closed-form", "divided-power-pairing"]))?;
        for name in ["f-pairing-closed-form", "divided-power-pairing"] {
            let part: Vec<Check> = checks.iter().filter(|c| c.identity == name).cloned().collect();
            all_hold(&format!("{file} {name}"), &part)?;
        }
        n += checks.len();
    }
    Ok(format!("{n} pairings equal their closed forms"))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let mut n = 0;
    for (file, window) in [
        ("a1xa1.json", 10),
        ("a2.json", 10),
        ("b2.json", 10),
        ("g2.json", 13),
        ("real_isotropic.json", 10),
        ("real_hyperbolic.json", 10),
    ] {
        let e = common::engine(file, window);
        let checks = run_sel(&e, &SuiteConfig::default(), &select(&[Suite::Symmetries], &[]))?;
        all_hold(file, &checks)?;
        n += checks.len();
    }
    let time = within(start, Duration::from_secs(300))?;
    Ok(format!("{n} records on 6 rank-2 data; {time}"))
}

fn criterion_5() -> Verdict {
    let start = Instant::now();
    let mut records = 0;
    let mut vectors = 0;
    let cases: [(&str, Option<usize>, i64); 5] = [
        ("a1xa1.json", None, 2),
        ("a2.json", None, 2),
        ("b2.json", None, 2),
        ("g2.json", Some(16), 2),
        ("mixed_rank3.json", None, 1),
    ];
    for (file, depth, max_level) in cases {
        let e = common::engine(file, 10);
        let cfg = SuiteConfig {
            depth,
            max_level,
            ..SuiteConfig::default()
        };
        let report = identities::braid_pair(&e, &cfg, 0, 1).map_err(|x| x.to_string())?;
        let algebra: Vec<Check> = report
            .checks
            .iter()
            .filter(|c| c.identity == "braid-relation-algebra")
            .cloned()
            .collect();
        let modules: Vec<Check> = report
            .checks
            .iter()
            .filter(|c| c.identity == "module-braid-relation")
            .cloned()
            .collect();
        all_hold(&format!("{file} on U"), &algebra)?;
        all_hold(&format!("{file} on modules"), &modules)?;
        records += report.checks.len();
        vectors += report.vectors;
    }
    let time = within(start, Duration::from_secs(600))?;
    Ok(format!("{records} records, {vectors} module vectors, both signs; {time}"))
}

fn criterion_6() -> Verdict {
    let mut n = 0;
    for (file, window) in [
        ("a2.json", 10),
        ("b2.json", 12),
        ("real_isotropic.json", 10),
        ("real_hyperbolic.json", 10),
    ] {
        let e = common::engine(file, window);
        let checks = run_sel(&e, &SuiteConfig::default(), &select(&[Suite::Form], &[]))?;
        all_hold(file, &checks)?;
        n += checks.len();
    }
    Ok(format!("{n} records on 4 data"))
}

fn criterion_7() -> Verdict {
    let mut n = 0;
    let primitive = [
        "primitive-leading-term",
        "primitive-orthogonality",
        "primitive-spanning",
        "primitive-coproduct",
    ];
    let level3 = SuiteConfig {
        max_level: 3,
        ..SuiteConfig::default()
    };
    for file in ["isotropic1.json", "hyperbolic1.json"] {
        let e = common::engine(file, 8);
        let checks = run_sel(&e, &level3, &select(&[], &primitive))?;
        all_hold(file, &checks)?;
        n += checks.len();
    }
    let algebra = ["form-symmetry", "coproduct-coassociativity"];
    let modules = ["module-category-o", "module-transport", "module-intertwining"];
    let cfg = SuiteConfig {
        samples: 50,
        ..SuiteConfig::default()
    };
    for file in ["a2.json", "b2.json", "real_isotropic.json", "real_hyperbolic.json", "mixed_rank3.json"] {
        let e = common::engine(file, 10);
        let mut only: Vec<&str> = algebra.to_vec();
        only.extend(modules);
        if !e.datum().imaginary_indices().is_empty() {
            only.extend(primitive);
        }
        let checks = run_sel(&e, &cfg, &select(&[], &only))?;
        for name in &only {
            let part: Vec<Check> = checks.iter().filter(|c| &c.identity == name).cloned().collect();
            all_hold(&format!("{file} {name}"), &part)?;
        }
        n += checks.len();
    }
    Ok(format!("{n} records, 50 seeded vectors per module"))
}

fn criterion_8() -> Verdict {
    let only = ["module-intertwining", "module-transport", "primitive-orthogonality", "f-pairing-closed-form"];
    let report = |e: &Engine, seed: u64| -> std::result::Result<String, String> {
        let cfg = SuiteConfig {
            seed,
            samples: 20,
            ..SuiteConfig::default()
        };
        let checks = run_sel(e, &cfg, &select(&[], &only))?;
        let json: Vec<_> = checks.iter().map(|c| c.to_json()).collect();
        serde_json::to_string_pretty(&json).map_err(|x| x.to_string())
    };
    let a = report(&common::engine("real_isotropic.json", 10), 5)?;
    let b = report(&common::engine("real_isotropic.json", 10), 5)?;
    if a != b {
        return Err("equal seeds gave different reports".into());
    }
    let dir = tempfile::tempdir().map_err(|x| x.to_string())?;
    let cached = || {
        Engine::new(
            common::load("real_isotropic.json"),
            EngineConfig {
                window: 10,
                cache_dir: Some(dir.path().to_path_buf()),
                ..EngineConfig::default()
            },
        )
    };
    let cold = report(&cached(), 5)?;
    let warm = report(&cached(), 5)?;
    if cold != a || warm != a {
        return Err("cached run differs from the cache-free run".into());
    }
    let uncached = common::engine("b2.json", 8);
    let with_cache = Engine::new(
        common::load("b2.json"),
        EngineConfig {
            cache_dir: Some(dir.path().to_path_buf()),
            ..EngineConfig::default()
        },
    );
    for beta in [RootVec(vec![2, 2]), RootVec(vec![1, 3]), RootVec(vec![3, 2])] {
        let g0 = uncached.free().gram(&beta).map_err(|x| x.to_string())?;
        let g1 = with_cache.free().gram(&beta).map_err(|x| x.to_string())?;
        if g0.matrix != g1.matrix {
            return Err(format!("Gram table {beta:?} differs with the cache"));
        }
    }
    Ok(format!("{} identical bytes for equal seeds; cache on and off agree", a.len()))
}

fn main() {
    let criteria: [(u8, &str, fn() -> Verdict); 8] = [
        (1, "primitive generators", criterion_1),
        (2, "Serre elements lie in the radical", criterion_2),
        (3, "closed-form pairings", criterion_3),
        (4, "symmetry identities on rank-2 data", criterion_4),
        (5, "braid relations on U and on modules", criterion_5),
        (6, "form identities for the f/g families", criterion_6),
        (7, "property suites", criterion_7),
        (8, "determinism and cache transparency", criterion_8),
    ];
    let filter: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failed = 0;
    for (n, title, f) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {n}: PASS  {title} ({detail}) [{secs:.1} s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL  {title}: {why} [{secs:.1} s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
