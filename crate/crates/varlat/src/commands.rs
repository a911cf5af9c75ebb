//! Batch commands behind the `varlat` binary. Each returns a payload and a
//! status; `main` only parses flags, prints and sets the exit code.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use varlat_core::perm::{subgroup_lattice, MAX_ENUMERATION_DEGREE};
use varlat_core::varieties::{family_join, family_meet, free_object, holds, perm_group};
use varlat_core::{
    Basis, DeriveOptions, FiniteLattice, Identity, PermError, VarietyError, VarietyHandle, Verdict, WordError,
};

use crate::formats::{
    classification_rows, hasse_dot, load_lattice, subgroup_json, trace_json, LatticeDoc, LoadError,
};
use crate::random::DEFAULT_SEED;
use crate::suites::{self, SuiteReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Violation,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub elapsed_ms: u64,
}

/// What a command produced: machine payload plus a short human rendering.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub status: Status,
    pub payload: Value,
    pub text: String,
}

impl Outcome {
    fn ok(payload: Value, text: impl Into<String>) -> Self {
        Outcome {
            status: Status::Ok,
            payload,
            text: text.into(),
        }
    }

    fn from_suite(report: &SuiteReport, extra: Value) -> Self {
        let status = if report.passed() { Status::Ok } else { Status::Violation };
        let mut text = String::new();
        for c in &report.checks {
            writeln!(text, "{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name).unwrap();
        }
        let mut payload = serde_json::to_value(report).expect("plain data");
        if let (Value::Object(map), Value::Object(more)) = (&mut payload, extra) {
            map.extend(more);
        }
        Outcome {
            status,
            payload,
            text: text.trim_end().to_string(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl From<WordError> for CommandError {
    fn from(e: WordError) -> Self {
        CommandError::Variety(e.into())
    }
}

impl From<PermError> for CommandError {
    fn from(e: PermError) -> Self {
        CommandError::Variety(e.into())
    }
}

/// Times `f` and folds errors into an `error` (or, for lattice-axiom
/// failures, `violation`) result.
pub fn run(f: impl FnOnce() -> Result<Outcome, CommandError>) -> (CommandResult, String) {
    let start = Instant::now();
    let (status, payload, text) = match f() {
        Ok(o) => (o.status, o.payload, o.text),
        Err(CommandError::Load(LoadError::NotALattice(e))) => {
            let msg = e.to_string();
            (Status::Violation, json!({ "error": "NotALattice", "message": msg }), msg)
        }
        Err(e) => {
            let msg = e.to_string();
            (Status::Error, json!({ "error": msg }), format!("error: {msg}"))
        }
    };
    let result = CommandResult {
        status,
        payload,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    (result, text)
}

fn write_file(path: &Path, contents: &str) -> Result<(), CommandError> {
    std::fs::write(path, contents).map_err(|source| CommandError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn classification_text(lattice: &FiniteLattice) -> (Value, String) {
    let flags = lattice.classify_all();
    let rows = classification_rows(lattice, &flags);
    let mut text = String::from("element\tneutral\tdistrib\tstandard\tmodular\tcancel\n");
    let mark = |b: bool| if b { "yes" } else { "-" };
    for r in &rows {
        writeln!(
            text,
            "{}\t{}\t{}\t{}\t{}\t{}",
            r.element,
            mark(r.neutral),
            mark(r.distributive),
            mark(r.standard),
            mark(r.modular),
            mark(r.cancellable)
        )
        .unwrap();
    }
    let pick = |f: fn(&varlat_core::ElementClassification) -> bool| -> Vec<String> {
        flags.iter().filter(|c| f(c)).map(|c| lattice.name(c.element)).collect()
    };
    let payload = json!({
        "elements": lattice.size(),
        "distributive_lattice": lattice.is_distributive_lattice(),
        "cancellable": pick(|c| c.cancellable),
        "modular": pick(|c| c.modular),
        "neutral": pick(|c| c.neutral),
        "classification": rows,
    });
    (payload, text.trim_end().to_string())
}

pub fn lattice_classify(path: &Path, dot: Option<&Path>) -> Result<Outcome, CommandError> {
    let lattice = load_lattice(path)?;
    if let Some(out) = dot {
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        write_file(out, &hasse_dot(&lattice, &name))?;
    }
    let (payload, text) = classification_text(&lattice);
    Ok(Outcome::ok(payload, text))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupAction {
    Build,
    Classify,
    Figure,
}

pub fn subgroups(n: usize, action: SubgroupAction, dot: Option<&Path>) -> Result<Outcome, CommandError> {
    if n == 0 {
        return Err(PermError::ZeroDegree.into());
    }
    if n > MAX_ENUMERATION_DEGREE {
        return Err(PermError::DegreeTooLarge(n).into());
    }
    let (lattice, groups) = subgroup_lattice(n)?;
    if let Some(out) = dot {
        write_file(out, &hasse_dot(&lattice, &format!("Sub(S_{n})")))?;
    }
    match action {
        SubgroupAction::Build => {
            let subgroups: Vec<Value> = groups
                .iter()
                .enumerate()
                .map(|(i, g)| subgroup_json(&lattice.name(i), g))
                .collect();
            let text = format!("Sub(S_{n}): {} subgroups, height {}", lattice.size(), lattice.height());
            Ok(Outcome::ok(
                json!({
                    "n": n,
                    "nodes": lattice.size(),
                    "subgroups": subgroups,
                    "lattice": LatticeDoc::from_lattice(&lattice),
                }),
                text,
            ))
        }
        SubgroupAction::Classify => {
            let (payload, text) = classification_text(&lattice);
            Ok(Outcome::ok(payload, text))
        }
        SubgroupAction::Figure => {
            let report = suites::subgroup_figure(n)?;
            Ok(Outcome::from_suite(&report, json!({ "n": n })))
        }
    }
}

fn handle(text: &str) -> Result<VarietyHandle, CommandError> {
    Ok(VarietyHandle::parse(text)?)
}

pub fn variety_check(h: &str, identity: &str) -> Result<Outcome, CommandError> {
    let v = handle(h)?;
    let id = Identity::parse(identity)?;
    let decision = holds(&v, &id)?;
    Ok(Outcome::ok(
        json!({ "handle": v.spec_string(), "name": v.name(), "identity": id.render(), "holds": decision }),
        decision.to_string(),
    ))
}

pub fn variety_lattice_op(a: &str, b: &str, join: bool) -> Result<Outcome, CommandError> {
    let (x, y) = (handle(a)?, handle(b)?);
    let r = if join { family_join(&x, &y)? } else { family_meet(&x, &y)? };
    let op = if join { "join" } else { "meet" };
    Ok(Outcome::ok(
        json!({ "left": x.spec_string(), "right": y.spec_string(), op: r.spec_string(), "name": r.name() }),
        r.spec_string(),
    ))
}

pub fn variety_permgroup(h: &str, k: usize) -> Result<Outcome, CommandError> {
    let v = handle(h)?;
    let g = perm_group(&v, k)?;
    let label = g.to_string();
    Ok(Outcome::ok(
        json!({ "handle": v.spec_string(), "k": k, "group": subgroup_json(&label, &g) }),
        label,
    ))
}

pub fn variety_free(h: &str, k: usize) -> Result<Outcome, CommandError> {
    let v = handle(h)?;
    let f = free_object(&v, k)?;
    let names: Vec<String> = f
        .elements()
        .iter()
        .map(|e| e.as_ref().map_or_else(|| "0".to_string(), |w| w.render()))
        .collect();
    let rows = f.table_rows();
    let mut text = format!("{} elements\n", f.size());
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<&str> = row.iter().map(|&j| names[j].as_str()).collect();
        writeln!(text, "{}\t| {}", names[i], cells.join("\t")).unwrap();
    }
    Ok(Outcome::ok(
        json!({
            "handle": v.spec_string(),
            "generators": k,
            "size": f.size(),
            "elements": names,
            "zero": f.zero(),
            "table": rows,
        }),
        text.trim_end().to_string(),
    ))
}

pub fn derive_goal(basis: &[String], goal: &str, opts: &DeriveOptions) -> Result<Outcome, CommandError> {
    let lines: Vec<&str> = basis.iter().map(String::as_str).collect();
    let basis = Basis::parse(&lines)?;
    let goal = Identity::parse(goal)?;
    let verdict = varlat_core::deduction::derive(&basis, &goal, opts)?;
    let (proved, trace, text) = match &verdict {
        Verdict::Proved(t) => {
            let text = t
                .chains
                .iter()
                .map(varlat_core::deduction::render_chain)
                .collect::<Vec<_>>()
                .join("\n");
            (true, trace_json(t), format!("proved\n{text}"))
        }
        Verdict::Unknown => (false, Value::Null, "unknown".to_string()),
    };
    Ok(Outcome::ok(
        json!({
            "goal": goal.render(),
            "depth_bound": opts.depth_bound,
            "size_bound": opts.size_bound,
            "proved": proved,
            "trace": trace,
        }),
        text,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Figure1,
    SubgroupWitness,
    UTheory,
    Incomparability,
    Oracles,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub cap: usize,
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub max_len: usize,
    pub letters: usize,
    pub derive: DeriveOptions,
    pub skip_derive: bool,
    pub dot: Option<PathBuf>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: 5,
            n: 3,
            seed: DEFAULT_SEED,
            samples: 5000,
            max_len: 4,
            letters: 3,
            derive: DeriveOptions::default(),
            skip_derive: false,
            dot: None,
        }
    }
}

pub fn verify(suite: Suite, opts: &VerifyOptions) -> Result<Outcome, CommandError> {
    let (report, extra) = match suite {
        Suite::Figure1 => {
            let run = suites::family_figure(opts.cap)?;
            if let Some(out) = &opts.dot {
                write_file(out, &hasse_dot(&run.lattice, "cancellable nil-varieties"))?;
            }
            (run.report, json!({ "cap": opts.cap, "elements": run.lattice.size() }))
        }
        Suite::SubgroupWitness => (suites::subgroup_witness(opts.n, &opts.derive)?, json!({ "n": opts.n })),
        Suite::UTheory => (
            suites::u_theory(opts.max_len, opts.letters)?,
            json!({ "max_len": opts.max_len, "letters": opts.letters }),
        ),
        Suite::Incomparability => (
            suites::incomparability(opts.seed, opts.samples)?,
            json!({ "seed": opts.seed, "samples": opts.samples }),
        ),
        Suite::Oracles => {
            let derive = (!opts.skip_derive).then_some(&opts.derive);
            (
                suites::oracles(opts.max_len, opts.letters, derive)?,
                json!({ "max_len": opts.max_len, "letters": opts.letters }),
            )
        }
    };
    Ok(Outcome::from_suite(&report, extra))
}
