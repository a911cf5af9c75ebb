use serde_json::Value;
use varlat::fixtures;
use varlat::formats::{classification_rows, hasse_dot, parse_lattice, trace_json, LatticeDoc, LoadError};
use varlat_core::deduction::{derive, DeriveOptions, Verdict};
use varlat_core::perm::subgroup_lattice;
use varlat_core::{Basis, FiniteLattice, Identity};

#[test]
fn lattice_doc_round_trips() {
    let (sub4, _) = subgroup_lattice(4).unwrap();
    for l in [fixtures::lattice("n5").unwrap(), FiniteLattice::boolean(3), sub4] {
        let doc = LatticeDoc::from_lattice(&l);
        let back = parse_lattice(&doc.to_json()).unwrap();
        assert_eq!(back.size(), l.size());
        for a in 0..l.size() {
            for b in 0..l.size() {
                assert_eq!(back.leq(a, b), l.leq(a, b));
            }
        }
    }
}

#[test]
fn two_chain_fixture_has_three_order_pairs() {
    let l = fixtures::lattice("chain2").unwrap();
    assert_eq!(l.order_pairs(), 3);
    assert!(l.classify_all().iter().all(|c| c.neutral && c.cancellable && c.modular));
}

#[test]
fn n5_join_and_classification() {
    let l = fixtures::lattice("n5").unwrap();
    let (a, b, c) = (l.index_of("a").unwrap(), l.index_of("b").unwrap(), l.index_of("c").unwrap());
    assert_eq!(l.name(l.join(a, b)), "1");
    let rows = classification_rows(&l, &l.classify_all());
    let row_b = rows.iter().find(|r| r.element == "b").unwrap();
    assert!(!row_b.cancellable);
    // b ∨ a = b ∨ c and b ∧ a = b ∧ c with a ≠ c.
    assert_eq!(l.join(b, a), l.join(b, c));
    assert_eq!(l.meet(b, a), l.meet(b, c));
}

#[test]
fn m3_atoms_are_modular_but_not_cancellable() {
    let l = fixtures::lattice("m3").unwrap();
    for atom in ["a", "b", "c"] {
        let c = l.classify_element(l.index_of(atom).unwrap());
        assert!(c.modular && !c.cancellable, "{atom}");
    }
}

#[test]
fn schema_errors_are_distinguished_from_non_lattices() {
    let bad_shape = r#"{"elements": ["0", "a"], "covers": [["0"]]}"#;
    assert!(matches!(parse_lattice(bad_shape), Err(LoadError::Schema(_))));
    let unknown = r#"{"elements": ["0"], "covers": [["0", "q"]]}"#;
    assert!(matches!(parse_lattice(unknown), Err(LoadError::Schema(_))));
    let extra_field = r#"{"elements": ["0"], "covers": [], "top": "0"}"#;
    assert!(matches!(parse_lattice(extra_field), Err(LoadError::Schema(_))));
    let cycle = r#"{"elements": ["a", "b"], "covers": [["a", "b"], ["b", "a"]]}"#;
    assert!(matches!(parse_lattice(cycle), Err(LoadError::Schema(_))));
    let no_join = r#"{"elements": ["0", "a", "b"], "covers": [["0", "a"], ["0", "b"]]}"#;
    assert!(matches!(parse_lattice(no_join), Err(LoadError::NotALattice(_))));
    let empty = r#"{"elements": [], "covers": []}"#;
    assert!(matches!(parse_lattice(empty), Err(LoadError::Schema(_))));
}

#[test]
fn dot_lists_every_cover_bottom_to_top() {
    let (l, _) = subgroup_lattice(3).unwrap();
    let dot = hasse_dot(&l, "Sub(S_3)");
    assert!(dot.starts_with("digraph \"Sub(S_3)\" {"));
    assert!(dot.contains("rankdir=BT;"));
    assert_eq!(dot.matches(" -> ").count(), l.cover_pairs().len());
    assert!(dot.contains("\"T\" -> \"C_123\";"));
    assert!(dot.contains("{ rank=same; \"T\"; }"));
}

#[test]
fn dot_escapes_quotes() {
    let l = FiniteLattice::from_named_covers(vec!["a\"b".into(), "1".into()], &[("a\"b".into(), "1".into())]).unwrap();
    assert!(hasse_dot(&l, "q").contains("\"a\\\"b\" -> \"1\";"));
}

#[test]
fn trace_json_has_one_record_per_step() {
    let basis = Basis::parse(&["x1 x2 x3 = x2 x1 x3"]).unwrap();
    let goal = Identity::parse("x1 x2 x3 x4 = x1 x3 x2 x4").unwrap();
    let Verdict::Proved(trace) = derive(&basis, &goal, &DeriveOptions::default()).unwrap() else {
        panic!("window permutation should be provable");
    };
    let json = trace_json(&trace);
    let steps: Vec<&Value> = json["chains"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|c| c["steps"].as_array().unwrap())
        .collect();
    assert_eq!(steps.len(), trace.step_count());
    for s in steps {
        for key in ["word", "rule_index", "orientation", "substitution", "left_context", "right_context"] {
            assert!(s.get(key).is_some(), "{key}");
        }
    }
}
