//! Versioned expectation files bundled into the binary.

use std::collections::BTreeMap;

use serde::Deserialize;
use varlat_core::FiniteLattice;

use crate::formats::parse_lattice;

pub const SUPPORTED_VERSION: u32 = 1;

const SUB_S3: &str = include_str!("../fixtures/figures/sub_s3.json");
const SUB_S4: &str = include_str!("../fixtures/figures/sub_s4.json");
const FIGURE1_LOW: &str = include_str!("../fixtures/figures/figure1_low.json");

/// Named lattice fixtures, by file stem.
pub const LATTICES: &[(&str, &str)] = &[
    ("chain2", include_str!("../fixtures/lattices/chain2.json")),
    ("n5", include_str!("../fixtures/lattices/n5.json")),
    ("m3", include_str!("../fixtures/lattices/m3.json")),
    ("boolean3", include_str!("../fixtures/lattices/boolean3.json")),
];

/// Expected shape of a subgroup-lattice figure.
#[derive(Clone, Debug, Deserialize)]
pub struct SubgroupFigure {
    pub version: u32,
    pub figure: String,
    pub n: usize,
    pub nodes: usize,
    pub height: usize,
    pub atoms: usize,
    pub order_profile: BTreeMap<String, usize>,
    pub named: Vec<String>,
    pub covers: Vec<(String, String)>,
    pub cancellable: Vec<String>,
    /// Every proper nontrivial modular element contains this subgroup.
    pub modular_elements_contain: Option<String>,
}

/// Expected low end of the family lattice, valid for every `cap >= min_cap`.
#[derive(Clone, Debug, Deserialize)]
pub struct FamilyFigure {
    pub version: u32,
    pub figure: String,
    pub min_cap: usize,
    pub covers: Vec<(String, String)>,
    pub upper_covers: BTreeMap<String, Vec<String>>,
}

fn checked<T>(value: T, version: u32) -> T {
    assert_eq!(version, SUPPORTED_VERSION, "bundled fixture has an unexpected version");
    value
}

pub fn subgroup_figure(n: usize) -> Option<SubgroupFigure> {
    let text = match n {
        3 => SUB_S3,
        4 => SUB_S4,
        _ => return None,
    };
    let fig: SubgroupFigure = serde_json::from_str(text).expect("bundled fixture parses");
    let version = fig.version;
    Some(checked(fig, version))
}

pub fn family_figure() -> FamilyFigure {
    let fig: FamilyFigure = serde_json::from_str(FIGURE1_LOW).expect("bundled fixture parses");
    let version = fig.version;
    checked(fig, version)
}

pub fn lattice(name: &str) -> Option<FiniteLattice> {
    LATTICES
        .iter()
        .find(|(stem, _)| *stem == name)
        .map(|(_, text)| parse_lattice(text).expect("bundled fixture is a lattice"))
}
