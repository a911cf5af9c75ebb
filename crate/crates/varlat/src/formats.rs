//! JSON and DOT encodings for lattices, classifications, subgroups and
//! deduction traces.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use varlat_core::deduction::{Orientation, Term, TraceStep};
use varlat_core::words::Word;
use varlat_core::{DeductionTrace, ElementClassification, FiniteLattice, LatticeError, Subgroup};

/// On-disk lattice: element names and `[lower, upper]` cover pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeDoc {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
}

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("schema error: {0}")]
    Schema(String),
    /// The covers are well formed but do not generate a lattice.
    #[error("{0}")]
    NotALattice(LatticeError),
}

impl LatticeDoc {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        serde_json::from_str(text).map_err(|e| LoadError::Schema(e.to_string()))
    }

    pub fn from_lattice(lattice: &FiniteLattice) -> Self {
        let covers = lattice
            .cover_pairs()
            .into_iter()
            .map(|(a, b)| (lattice.name(a), lattice.name(b)))
            .collect();
        LatticeDoc {
            elements: (0..lattice.size()).map(|i| lattice.name(i)).collect(),
            covers,
        }
    }

    pub fn build(&self) -> Result<FiniteLattice, LoadError> {
        FiniteLattice::from_named_covers(self.elements.clone(), &self.covers).map_err(|e| match e {
            LatticeError::NotALattice(..) => LoadError::NotALattice(e),
            other => LoadError::Schema(other.to_string()),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }
}

pub fn parse_lattice(text: &str) -> Result<FiniteLattice, LoadError> {
    LatticeDoc::parse(text)?.build()
}

pub fn load_lattice(path: &Path) -> Result<FiniteLattice, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_lattice(&text)
}

fn dot_id(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram, bottom to top, one `rank=same` group per height level.
pub fn hasse_dot(lattice: &FiniteLattice, graph_name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", dot_id(graph_name)).unwrap();
    out.push_str("  rankdir=BT;\n  node [shape=plaintext];\n  edge [arrowhead=none];\n");
    let ranks = lattice.ranks();
    for level in 0..=lattice.height() {
        let members: Vec<String> = (0..lattice.size())
            .filter(|&i| ranks[i] == level)
            .map(|i| dot_id(&lattice.name(i)))
            .collect();
        writeln!(out, "  {{ rank=same; {}; }}", members.join("; ")).unwrap();
    }
    for (a, b) in lattice.cover_pairs() {
        writeln!(out, "  {} -> {};", dot_id(&lattice.name(a)), dot_id(&lattice.name(b))).unwrap();
    }
    out.push_str("}\n");
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    pub element: String,
    pub neutral: bool,
    pub distributive: bool,
    pub standard: bool,
    pub modular: bool,
    pub cancellable: bool,
}

pub fn classification_rows(lattice: &FiniteLattice, flags: &[ElementClassification]) -> Vec<ClassificationRow> {
    flags
        .iter()
        .map(|c| ClassificationRow {
            element: lattice.name(c.element),
            neutral: c.neutral,
            distributive: c.distributive,
            standard: c.standard,
            modular: c.modular,
            cancellable: c.cancellable,
        })
        .collect()
}

pub fn subgroup_json(label: &str, g: &Subgroup) -> Value {
    let generators: Vec<String> = varlat_core::varieties::generating_set(g)
        .iter()
        .map(|p| p.to_string())
        .collect();
    json!({
        "name": label,
        "order": g.order(),
        "generators": generators,
    })
}

fn term_text(t: &Term) -> String {
    match t {
        Term::Word(w) => w.render(),
        Term::Zero => "0".to_string(),
    }
}

fn letters_text(ls: &[varlat_core::Letter]) -> String {
    ls.iter().map(|l| l.as_str()).collect::<Vec<_>>().join(" ")
}

pub fn step_json(step: &TraceStep) -> Value {
    let substitution: serde_json::Map<String, Value> = step
        .substitution
        .iter()
        .map(|(l, w): (&varlat_core::Letter, &Word)| (l.as_str().to_string(), Value::String(w.render())))
        .collect();
    json!({
        "word": term_text(&step.result),
        "rule_index": step.rule_index,
        "orientation": match step.orientation {
            Orientation::Forward => "forward",
            Orientation::Backward => "backward",
        },
        "substitution": substitution,
        "left_context": letters_text(&step.left),
        "right_context": letters_text(&step.right),
    })
}

pub fn trace_json(trace: &DeductionTrace) -> Value {
    let chains: Vec<Value> = trace
        .chains
        .iter()
        .map(|c| {
            json!({
                "start": term_text(&c.start),
                "steps": c.steps.iter().map(step_json).collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({ "chains": chains })
}
