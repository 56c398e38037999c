//! One function per subcommand. Each returns an [`Outcome`]; printing and the
//! process exit status are decided by the caller.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use qbb_core::cartan::{BraidOrder, Datum, Label, RootVec};
use qbb_core::engine::{Engine, EngineConfig};
use qbb_core::freealg::{self, CACHE_ENV};
use qbb_core::identities::{self, registry, Selection, Suite, SuiteConfig};
use qbb_core::modules::{HWModule, ModuleKind};
use qbb_core::report::{Check, Status, Tally};
use qbb_core::{Error, Result};

use crate::args::{CacheAction, Command, GlobalOpts};

/// What a command produced: both renderings and the exit status.
pub struct Outcome {
    pub text: String,
    pub json: Value,
    pub code: i32,
    /// Printed on stderr in every format (budget hints, vacuous passes).
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            code: 0,
            notes: Vec::new(),
        }
    }
}

pub fn run(opts: &GlobalOpts, command: &Command) -> Result<Outcome> {
    if let Command::Cache { action } = command {
        return cache(opts, *action);
    }
    let datum = load_datum(opts)?;
    let mut warnings: Vec<String> = datum.warnings().iter().map(|w| format!("warning: {w}")).collect();
    let engine = Engine::new(datum, engine_config(opts));
    let cfg = suite_config(opts);
    let mut out = match command {
        Command::Gram { degree } => gram(&engine, degree)?,
        Command::Primitive { i, l } => primitive(&engine, i, *l)?,
        Command::SerreCheck => {
            let checks = run_selected(&engine, &cfg, &[], &["serre-radical"])?;
            let mut out = checks_outcome(&checks);
            if checks.is_empty() {
                out.text = "no Serre relations in this datum: vacuous pass\n".into();
            }
            out
        }
        Command::RadicalCheck => {
            checks_outcome(&run_selected(&engine, &cfg, &[], &["radical-ideal"])?)
        }
        Command::IdentitySuite { suite, only, list } => {
            if *list {
                list_registry()
            } else {
                let only: Vec<&str> = only.iter().map(String::as_str).collect();
                let suites = suite
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<Vec<Suite>>>()?;
                checks_outcome(&run_selected(&engine, &cfg, &suites, &only)?)
            }
        }
        Command::BraidCheck { pair } => braid_check(&engine, &cfg, pair)?,
        Command::Module { weight } => module(&engine, &cfg, weight)?,
        Command::FormInvariance => checks_outcome(&run_selected(
            &engine,
            &cfg,
            &[],
            &["symmetry-form-invariance", "f-pairing-invariance"],
        )?),
        Command::Cache { .. } => unreachable!("handled above"),
    };
    warnings.append(&mut out.notes);
    out.notes = warnings;
    Ok(out)
}

fn load_datum(opts: &GlobalOpts) -> Result<Datum> {
    let path = opts
        .datum
        .as_ref()
        .ok_or_else(|| Error::domain("this command needs --datum FILE"))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Datum::from_json(&text)
}

fn engine_config(opts: &GlobalOpts) -> EngineConfig {
    let mut c = EngineConfig {
        cache_dir: opts.cache_dir.clone(),
        no_cache: opts.no_cache,
        ..EngineConfig::default()
    };
    if let Some(w) = opts.window {
        c.window = w;
    }
    if let Some(b) = opts.budget {
        c.height_budget = b;
    }
    c
}

fn suite_config(opts: &GlobalOpts) -> SuiteConfig {
    let mut c = SuiteConfig {
        seed: opts.seed,
        depth: opts.depth,
        ..SuiteConfig::default()
    };
    if let Some(v) = opts.max_param {
        c.max_param = v;
    }
    if let Some(v) = opts.max_level {
        c.max_level = v;
    }
    if let Some(v) = opts.max_lbeta {
        c.max_lbeta = v;
    }
    if let Some(v) = opts.max_height {
        c.max_height = v;
    }
    if let Some(v) = opts.samples {
        c.samples = v;
    }
    c
}

fn run_selected(
    engine: &Engine,
    cfg: &SuiteConfig,
    suites: &[Suite],
    only: &[&str],
) -> Result<Vec<Check>> {
    let sel = Selection {
        suites: suites.to_vec(),
        only: only.iter().map(|s| s.to_string()).collect(),
    };
    identities::run(engine, cfg, &sel)
}

/// Records, one line each, followed by a tally; the exit status follows the tally.
fn checks_outcome(checks: &[Check]) -> Outcome {
    let tally = Tally::of(checks);
    let mut text = String::new();
    for c in checks {
        text.push_str(&c.text_line());
        text.push('\n');
    }
    text.push_str(&format!(
        "{} hold, {} fail, {} inconclusive\n",
        tally.holds, tally.fails, tally.inconclusive
    ));
    let json = Value::Array(checks.iter().map(Check::to_json).collect());
    let mut notes = Vec::new();
    if let Some(note) = budget_note(checks) {
        notes.push(note);
    }
    Outcome {
        text,
        json,
        code: tally.exit_code(),
        notes,
    }
}

fn budget_note(checks: &[Check]) -> Option<String> {
    let undecided: Vec<&Check> = checks
        .iter()
        .filter(|c| c.status == Status::Inconclusive)
        .collect();
    if undecided.is_empty() {
        return None;
    }
    let needed = undecided.iter().filter_map(|c| c.needed).max().unwrap_or(0);
    Some(format!(
        "inconclusive: {} record(s) exceeded a budget; rerun with a window, height budget or depth of at least {needed}",
        undecided.len()
    ))
}

fn list_registry() -> Outcome {
    let mut text = String::new();
    let mut rows = Vec::new();
    for id in registry() {
        text.push_str(&format!("{:<40} {:<12} {}\n", id.name, id.suite.name(), id.summary));
        rows.push(json!({"name": id.name, "suite": id.suite.name(), "summary": id.summary}));
    }
    Outcome::ok(text, Value::Array(rows))
}

/// `name:mult,...` with omitted indices 0.
fn parse_degree(d: &Datum, spec: &str) -> Result<RootVec> {
    let mut v = vec![0i64; d.rank()];
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, mult) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("degree entry `{part}` is not `name:mult`")))?;
        let k: i64 = mult
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad multiplicity in `{part}`")))?;
        if k < 0 {
            return Err(Error::Parse(format!("negative multiplicity in `{part}`")));
        }
        v[d.index(name.trim())?] += k;
    }
    Ok(RootVec(v))
}

fn degree_json(d: &Datum, beta: &RootVec) -> Value {
    let mut m = Map::new();
    for (i, &k) in beta.0.iter().enumerate() {
        m.insert(d.name(i).to_string(), json!(k));
    }
    Value::Object(m)
}

fn gram(engine: &Engine, spec: &str) -> Result<Outcome> {
    let d = engine.datum();
    let beta = parse_degree(d, spec)?;
    let g = engine.free().gram(&beta)?;
    let words: Vec<String> = g
        .basis
        .iter()
        .map(|w| freealg::render_word(d, w, "e"))
        .collect();
    let matrix: Vec<Vec<String>> = g
        .matrix
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
    let mut text = format!(
        "degree {}: {} words, rank {}, radical dimension {}\n",
        degree_json(d, &beta),
        words.len(),
        g.rank,
        words.len() - g.rank
    );
    for (k, w) in words.iter().enumerate() {
        text.push_str(&format!("  [{k}] {w}\n"));
    }
    for row in &matrix {
        text.push_str(&format!("  {}\n", row.join(", ")));
    }
    let json = json!({
        "degree": degree_json(d, &beta),
        "basis": words,
        "matrix": matrix,
        "rank": g.rank,
    });
    Ok(Outcome::ok(text, json))
}

fn primitive(engine: &Engine, name: &str, l: usize) -> Result<Outcome> {
    let d = engine.datum();
    let lab = Label::new(d.index(name)?, l);
    d.check_label(lab)?;
    let p = engine.prims().get(lab)?;
    let tag = format!("{},{}", d.name(lab.i()), l);
    let display = freealg::render_display(d, &p.element, "e", Some(&vec![lab]));
    let mut text = format!("𝚊_{{{tag}}} = {display}\nτ_{{{tag}}} = {}\n", p.tau);
    let mut notes = Vec::new();
    if p.singular_system {
        notes.push(
            "note: the orthogonality system is singular; the generator is unique only modulo the radical"
                .to_string(),
        );
        text.push_str("(unique modulo the radical)\n");
    }
    let gammas: Vec<Value> = p
        .gammas
        .iter()
        .map(|(c, g)| json!({"composition": c, "gamma": g.to_string()}))
        .collect();
    let json = json!({
        "label": tag,
        "element": freealg::render(d, &p.element, "e"),
        "display": display,
        "tau": p.tau.to_string(),
        "gammas": gammas,
        "unique_modulo_radical": p.singular_system,
    });
    Ok(Outcome {
        text,
        json,
        code: 0,
        notes,
    })
}

fn braid_check(engine: &Engine, cfg: &SuiteConfig, pair: &str) -> Result<Outcome> {
    let d = engine.datum();
    let (a, b) = pair
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("pair `{pair}` is not `i,j`")))?;
    let (i, j) = (d.index(a.trim())?, d.index(b.trim())?);
    let report = identities::braid_pair(engine, cfg, i, j)?;
    let BraidOrder::Finite(m) = report.order else {
        let mut out = checks_outcome(&[]);
        out.text = format!(
            "m_ij=∞: a_ij a_ji = {} >= 4, no braid relation to check\n",
            d.a(i, j) * d.a(j, i)
        );
        return Ok(out);
    };
    let mut out = checks_outcome(&report.checks);
    let tally = Tally::of(&report.checks);
    let verdict = if tally.fails > 0 {
        "NOT all equal"
    } else if tally.inconclusive > 0 {
        "all compared vectors equal, some checks inconclusive"
    } else {
        "all equal"
    };
    out.text
        .push_str(&format!("m_ij={m}, {} vectors checked, {verdict}\n", report.vectors));
    Ok(out)
}

/// `name=value,...` of h-values with omitted indices 0.
fn parse_weight(d: &Datum, spec: &str) -> Result<Vec<i64>> {
    let mut h = vec![0i64; d.rank()];
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("weight entry `{part}` is not `name=value`")))?;
        h[d.index(name.trim())?] = value
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad value in `{part}`")))?;
    }
    Ok(h)
}

fn module(engine: &Engine, cfg: &SuiteConfig, spec: &str) -> Result<Outcome> {
    let d = engine.datum();
    let h = parse_weight(d, spec)?;
    let depth = cfg
        .depth
        .unwrap_or_else(|| identities::default_module_depth(engine));
    let m = HWModule::build(
        engine.ualg().clone(),
        d.weight_of(&h),
        depth,
        ModuleKind::Irreducible,
    )?;
    let complete = m.dims_by_height().last().is_some_and(|&k| k == 0);
    let mut text = format!(
        "V(h = {h:?}): depth {depth}, dimension {}{}\n",
        m.dim(),
        if complete { "" } else { " (truncated at the depth)" }
    );
    let mut rows = Vec::new();
    for (weight, dim) in m.character() {
        text.push_str(&format!("  h = {weight:?}  dim {dim}\n"));
        rows.push(json!({"h_values": weight, "dim": dim}));
    }
    let json = json!({
        "highest_weight": h,
        "depth": depth,
        "dim": m.dim(),
        "complete": complete,
        "character": rows,
        "warnings": m.warnings(),
    });
    let mut out = Outcome::ok(text, json);
    out.notes = m.warnings().iter().map(|w| format!("warning: {w}")).collect();
    Ok(out)
}

fn cache_dir(opts: &GlobalOpts) -> Result<PathBuf> {
    opts.cache_dir
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
        .ok_or_else(|| {
            Error::domain(format!("no cache directory: pass --cache-dir or set {CACHE_ENV}"))
        })
}

/// Cached Gram tables in `dir`, sorted by file name.
fn cache_entries(dir: &Path) -> Result<Vec<(String, u64)>> {
    if !dir.exists() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if name.starts_with("gram-") && (name.ends_with(".json") || name.ends_with(".tmp")) {
            out.push((name, entry.metadata()?.len()));
        }
    }
    out.sort();
    Ok(out)
}

fn cache(opts: &GlobalOpts, action: CacheAction) -> Result<Outcome> {
    let dir = cache_dir(opts)?;
    let entries = cache_entries(&dir)?;
    match action {
        CacheAction::Inspect => {
            // File names are `gram-<datum hash>-<degree>.json`.
            let mut by_datum: std::collections::BTreeMap<String, (usize, u64)> = Default::default();
            for (name, size) in &entries {
                let hash = name
                    .trim_start_matches("gram-")
                    .split('-')
                    .next()
                    .unwrap_or("")
                    .to_string();
                let slot = by_datum.entry(hash).or_default();
                slot.0 += 1;
                slot.1 += size;
            }
            let total: u64 = entries.iter().map(|e| e.1).sum();
            let mut text = format!(
                "{}: {} Gram table(s), {total} bytes\n",
                dir.display(),
                entries.len()
            );
            let mut rows = Vec::new();
            for (hash, (count, bytes)) in &by_datum {
                text.push_str(&format!("  datum {hash}: {count} table(s), {bytes} bytes\n"));
                rows.push(json!({"datum": hash, "tables": count, "bytes": bytes}));
            }
            let json = json!({
                "dir": dir.display().to_string(),
                "tables": entries.len(),
                "bytes": total,
                "datums": rows,
            });
            Ok(Outcome::ok(text, json))
        }
        CacheAction::Clear => {
            for (name, _) in &entries {
                std::fs::remove_file(dir.join(name))?;
            }
            let text = format!("{}: removed {} file(s)\n", dir.display(), entries.len());
            let json = json!({"dir": dir.display().to_string(), "removed": entries.len()});
            Ok(Outcome::ok(text, json))
        }
    }
}
