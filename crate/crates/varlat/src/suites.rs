//! Verification bundles shared by `varlat verify` and the acceptance tests.
//!
//! Every suite returns a [`SuiteReport`]: a list of named checks, each with a
//! pass flag and a JSON detail. A failed check is a falsified mathematical
//! expectation; malformed parameters surface as errors instead.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use varlat_core::deduction::Deriver;
use varlat_core::perm::{all_subgroups, subgroup_lattice};
use varlat_core::varieties::{
    bounded_theory, figure1_lattice, free_object, holds, subgroup_witness_harness, verify_u_theory,
};
use varlat_core::words::{pattern_leq, words_up_to};
use varlat_core::{
    Bound, DeriveOptions, FamilyKind, FiniteLattice, Identity, Letter, Permutation, Subgroup, VarietyError,
    VarietyHandle, Verdict, Word,
};

use crate::fixtures;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.to_string(),
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn names(lattice: &FiniteLattice, idx: impl IntoIterator<Item = usize>) -> Vec<String> {
    idx.into_iter().map(|i| lattice.name(i)).collect()
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

// ---------------------------------------------------------------------------
// Subgroup lattices.

/// Node counts, named nodes, covers and cancellable set of `Sub(S_n)` against
/// the stored figure, for `n` in {3, 4}.
pub fn subgroup_figure(n: usize) -> Result<SuiteReport, VarietyError> {
    let Some(fig) = fixtures::subgroup_figure(n) else {
        return Err(VarietyError::PreconditionFailed(format!("no stored figure for n = {n}")));
    };
    let (lattice, groups) = subgroup_lattice(n)?;
    let mut report = SuiteReport::new("subgroup-figure");

    report.check(
        "node count",
        lattice.size() == fig.nodes,
        json!({"expected": fig.nodes, "found": lattice.size()}),
    );
    report.check(
        "height",
        lattice.height() == fig.height,
        json!({"expected": fig.height, "found": lattice.height()}),
    );
    report.check(
        "atoms",
        lattice.atoms().len() == fig.atoms,
        json!({"expected": fig.atoms, "found": lattice.atoms().len()}),
    );

    let mut profile: BTreeMap<String, usize> = BTreeMap::new();
    for g in &groups {
        *profile.entry(g.order().to_string()).or_default() += 1;
    }
    report.check(
        "order profile",
        profile == fig.order_profile,
        json!({"expected": fig.order_profile, "found": profile}),
    );

    let missing: Vec<&String> = fig.named.iter().filter(|s| lattice.index_of(s).is_none()).collect();
    report.check("named nodes present", missing.is_empty(), json!({ "missing": missing }));

    let bad_covers: Vec<&(String, String)> = fig
        .covers
        .iter()
        .filter(|(a, b)| match (lattice.index_of(a), lattice.index_of(b)) {
            (Some(a), Some(b)) => !lattice.upper_covers(a).contains(&b),
            _ => true,
        })
        .collect();
    report.check("stored covers", bad_covers.is_empty(), json!({ "not_covers": bad_covers }));

    let flags = lattice.classify_all();
    let cancellable = sorted(names(&lattice, flags.iter().filter(|c| c.cancellable).map(|c| c.element)));
    report.check(
        "cancellable elements",
        cancellable == sorted(fig.cancellable.clone()),
        json!({"expected": fig.cancellable, "found": cancellable}),
    );

    if let Some(core) = &fig.modular_elements_contain {
        let report_row = modular_containment(&lattice, &groups, core);
        report.check("modular elements contain", report_row.0, report_row.1);
    }
    Ok(report)
}

/// Whether every proper nontrivial modular element of `Sub(S_n)` contains
/// the node labelled `core`.
pub fn modular_containment(lattice: &FiniteLattice, groups: &[Subgroup], core: &str) -> (bool, Value) {
    let Some(c) = lattice.index_of(core) else {
        return (false, json!({ "missing": core }));
    };
    let (bottom, top) = (lattice.bottom(), lattice.top());
    let modular: Vec<usize> = (0..lattice.size())
        .filter(|&x| x != bottom && x != top && lattice.is_modular_element(x))
        .collect();
    let offenders: Vec<String> = modular
        .iter()
        .filter(|&&x| !groups[c].is_subgroup_of(&groups[x]))
        .map(|&x| lattice.name(x))
        .collect();
    (
        offenders.is_empty(),
        json!({
            "core": core,
            "modular": names(lattice, modular.iter().copied()),
            "offenders": offenders,
        }),
    )
}

// ---------------------------------------------------------------------------
// Family lattice.

/// `adjoin_top(L × 2)`: the family lattice joined with the two-element chain
/// `{T, SL}`, plus a new top.
pub fn extended_family_lattice(lattice: &FiniteLattice) -> FiniteLattice {
    let two = FiniteLattice::from_named_covers(vec!["T".into(), "SL".into()], &[("T".into(), "SL".into())])
        .expect("two-element chain");
    lattice.direct_product(&two).adjoin_top("SEM")
}

pub struct FamilyFigureRun {
    pub report: SuiteReport,
    pub lattice: FiniteLattice,
    pub handles: Vec<VarietyHandle>,
}

/// Distributivity, stored low-end covers, `Y_{m,n} ⋖ X_{m,n}`, and
/// cancellability of every element after extending by `{T, SL}` and a top.
pub fn family_figure(cap: usize) -> Result<FamilyFigureRun, VarietyError> {
    let (lattice, handles) = figure1_lattice(cap)?;
    let fig = fixtures::family_figure();
    let mut report = SuiteReport::new("figure1");

    report.check(
        "distributive",
        lattice.is_distributive_lattice(),
        json!({ "elements": lattice.size() }),
    );

    if cap >= fig.min_cap {
        let bad: Vec<&(String, String)> = fig
            .covers
            .iter()
            .filter(|(a, b)| match (lattice.index_of(a), lattice.index_of(b)) {
                (Some(a), Some(b)) => !lattice.upper_covers(a).contains(&b),
                _ => true,
            })
            .collect();
        report.check("stored covers", bad.is_empty(), json!({ "not_covers": bad }));

        let mut mismatched = BTreeMap::new();
        for (node, expected) in &fig.upper_covers {
            let found = lattice
                .index_of(node)
                .map(|i| sorted(names(&lattice, lattice.upper_covers(i))))
                .unwrap_or_default();
            if found != sorted(expected.clone()) {
                mismatched.insert(node.clone(), json!({"expected": expected, "found": found}));
            }
        }
        report.check("stored upper covers", mismatched.is_empty(), json!(mismatched));
    }

    let mut not_covered = Vec::new();
    let mut pairs = 0;
    for (i, h) in handles.iter().enumerate() {
        if let VarietyHandle::Family { kind: FamilyKind::Y, m, n } = h {
            let x = VarietyHandle::family(FamilyKind::X, *m, *n)?;
            if &x == h {
                continue;
            }
            pairs += 1;
            let j = handles.iter().position(|g| *g == x).expect("X listed with Y");
            if !lattice.upper_covers(i).contains(&j) {
                not_covered.push(h.name());
            }
        }
    }
    report.check(
        "Y covered by X",
        not_covered.is_empty(),
        json!({ "pairs": pairs, "not_covered": not_covered }),
    );

    let extended = extended_family_lattice(&lattice);
    let failing: Vec<String> = (0..extended.size())
        .filter(|&x| !extended.is_cancellable(x))
        .map(|x| extended.name(x))
        .collect();
    report.check(
        "cancellable in extension",
        failing.is_empty(),
        json!({ "elements": extended.size(), "not_cancellable": failing }),
    );

    Ok(FamilyFigureRun {
        report,
        lattice,
        handles,
    })
}

// ---------------------------------------------------------------------------
// Subgroup-derived witness.

/// The standard subgroup triple `(V, G1, G2)` for degree 3 or 4.
pub fn witness_triple(n: usize) -> Result<(Subgroup, Subgroup, Subgroup), VarietyError> {
    let p = |s: &str| Permutation::parse_cycles(n, s);
    let t = |s: &str| -> Result<Subgroup, VarietyError> { Ok(Subgroup::generated(n, &[p(s)?])?) };
    match n {
        3 => Ok((t("(123)")?, t("(12)")?, t("(13)")?)),
        4 => {
            let base = Subgroup::klein_four().join(&Subgroup::generated(4, &[p("(12)")?, p("(34)")?])?)?;
            Ok((base, t("(13)")?, t("(24)")?))
        }
        _ => Err(VarietyError::PreconditionFailed(format!("witness triple needs n in {{3, 4}}, got {n}"))),
    }
}

pub fn subgroup_witness(n: usize, opts: &DeriveOptions) -> Result<SuiteReport, VarietyError> {
    let (base, first, second) = witness_triple(n)?;
    let mut report = SuiteReport::new("subgroup-witness");

    // The lattice-side premise: G1 and G2 have the same join and meet with V.
    let same_join = base.join(&first)? == base.join(&second)?;
    let same_meet = base.meet(&first)? == base.meet(&second)?;
    report.check(
        "equal join and meet in Sub(S_n)",
        same_join && same_meet && first != second,
        json!({
            "base": base.to_string(),
            "first": first.to_string(),
            "second": second.to_string(),
            "join": base.join(&first)?.to_string(),
            "meet": base.meet(&first)?.to_string(),
        }),
    );

    let w = subgroup_witness_harness(&base, &first, &second, opts)?;
    report.check(
        "variety joins coincide",
        w.joins_coincide,
        json!({ "words": w.words_checked }),
    );
    report.check("variety meets coincide", w.meets_coincide, json!({ "words": w.words_checked }));

    let d1 = VarietyHandle::subgroup_derived(first.clone());
    let d2 = VarietyHandle::subgroup_derived(second.clone());
    let (t1, t2) = (bounded_theory(&d1, n + 1, n + 1)?, bounded_theory(&d2, n + 1, n + 1)?);
    let separated = t1.separating_pair(&t2).or_else(|| t2.separating_pair(&t1));
    report.check(
        "D(G1,n) differs from D(G2,n)",
        separated.is_some() && w.separating_identity.is_some(),
        json!({
            "separating_pair": separated.map(|(a, b)| format!("{a} = {b}")),
            "separating_identity": w.separating_identity.as_ref().map(Identity::render),
        }),
    );
    let failed: Vec<String> = w.derivations_failed.iter().map(Identity::render).collect();
    report.check(
        "meet identities derivable",
        failed.is_empty() && w.splice_failures == 0,
        json!({
            "checked": w.derivations_checked,
            "unproved": failed,
            "splice_failures": w.splice_failures,
        }),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// The variety U.

pub fn u_theory(max_len: usize, max_letters: usize) -> Result<SuiteReport, VarietyError> {
    if max_letters > 4 || max_len > 6 {
        return Err(VarietyError::InvalidParameters(format!(
            "u-theory is limited to 4 letters and length 6, got {max_letters} and {max_len}"
        )));
    }
    let r = verify_u_theory(max_len, max_letters)?;
    let mut report = SuiteReport::new("u-theory");
    let shown: Vec<String> = r.mismatches.iter().take(10).map(|(a, b)| format!("{a} = {b}")).collect();
    report.check(
        "closure matches description",
        r.mismatches.is_empty(),
        json!({
            "words": r.words,
            "pairs": r.pairs,
            "nontrivial_identities": r.nontrivial_identities,
            "ideal_members": r.ideal_members,
            "mismatches": r.mismatches.len(),
            "first_mismatches": shown,
        }),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Incomparability.

/// Triples of pairwise incomparable words used to push zero identities
/// through a cancellable variety.
pub const INCOMPARABLE_TRIPLES: &[[&str; 3]] = &[
    ["x^2 y", "y x^2", "x y x"],
    ["x^3 y", "y x^3", "(x y)^2"],
    ["x^2 y x^2", "x y x^3", "x^3 y"],
    ["x y x^2", "(x y)^2", "x^2 y"],
];

fn random_word<R: Rng>(rng: &mut R, len: usize, letters: &[Letter]) -> Vec<Letter> {
    (0..len).map(|_| letters.choose(rng).expect("nonempty").clone()).collect()
}

/// Pairs `(u, v)` with equal length and content that are not equivalent.
pub fn random_same_shape_pairs(seed: u64, count: usize) -> Vec<(Word, Word)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphabet: Vec<Letter> = (1..=4).map(Letter::indexed).collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let len = rng.gen_range(2..=8);
        let k = rng.gen_range(1..=len.min(4));
        let letters = &alphabet[..k];
        let u = random_word(&mut rng, len, letters);
        let content: BTreeSet<&Letter> = u.iter().collect();
        let pool: Vec<Letter> = content.iter().map(|l| (*l).clone()).collect();
        let v = if rng.gen_bool(0.5) {
            let mut v = u.clone();
            v.shuffle(&mut rng);
            v
        } else {
            random_word(&mut rng, len, &pool)
        };
        if v.iter().collect::<BTreeSet<_>>() != content {
            continue;
        }
        let (u, v) = (
            Word::from_letters(u).expect("nonempty"),
            Word::from_letters(v).expect("nonempty"),
        );
        if varlat_core::words::equivalent(&u, &v).expect("semigroup words") {
            continue;
        }
        out.push((u, v));
    }
    out
}

pub fn incomparability(seed: u64, samples: usize) -> Result<SuiteReport, VarietyError> {
    let mut report = SuiteReport::new("incomparability");
    for triple in INCOMPARABLE_TRIPLES {
        let words: Vec<Word> = triple.iter().map(|s| Word::parse(s)).collect::<Result<_, _>>()?;
        let mut relations = Vec::new();
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                if i != j && pattern_leq(a, b)?.is_some() {
                    relations.push(format!("{a} <= {b}"));
                }
            }
        }
        report.check(
            format!("pairwise incomparable: {}", triple.join(", ")),
            relations.is_empty(),
            json!({ "relations": relations }),
        );
    }
    let mut violations = Vec::new();
    for (u, v) in random_same_shape_pairs(seed, samples) {
        if pattern_leq(&u, &v)?.is_some() || pattern_leq(&v, &u)?.is_some() {
            violations.push(format!("{u} | {v}"));
        }
    }
    report.check(
        "same length and content implies incomparable",
        violations.is_empty(),
        json!({ "seed": seed, "samples": samples, "violations": violations }),
    );
    Ok(report)
}

// ---------------------------------------------------------------------------
// Decision oracles.

/// Handles covered by the oracle sweep: `X/Y_{m,n}` with `m <= n <= max_n`,
/// the infinite rail, and `D(G,3)` for every `G <= S_3`.
pub fn oracle_handles(max_n: usize) -> Result<Vec<VarietyHandle>, VarietyError> {
    let mut indices: Vec<Bound> = (2..=max_n).map(Bound::Finite).collect();
    indices.push(Bound::Infinite);
    let mut out: Vec<VarietyHandle> = Vec::new();
    for kind in [FamilyKind::X, FamilyKind::Y] {
        for &n in &indices {
            for &m in indices.iter().filter(|&&m| m <= n) {
                let h = VarietyHandle::family(kind, m, n)?;
                if !out.contains(&h) {
                    out.push(h);
                }
            }
        }
    }
    for g in all_subgroups(3)? {
        out.push(VarietyHandle::subgroup_derived(g));
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct OracleTally {
    pub identities: usize,
    pub disagreements: Vec<String>,
    pub derive_calls: usize,
    pub unsound_proofs: Vec<String>,
}

/// Compares [`holds`] with equality in the free object on `letters`
/// generators for every identity over words of length `<= max_len`
/// (including `w = 0`), and, when `derive` is set, checks that bounded
/// deduction from the handle's basis proves none of the rejected ones.
pub fn oracle_sweep(
    handle: &VarietyHandle,
    max_len: usize,
    letters: usize,
    derive: Option<&DeriveOptions>,
) -> Result<OracleTally, VarietyError> {
    let free = free_object(handle, letters)?;
    let alphabet: Vec<Letter> = (1..=letters).map(Letter::indexed).collect();
    let words = words_up_to(&alphabet, max_len);
    let values: Vec<usize> = words.iter().map(|w| free.evaluate(w)).collect::<Result<_, _>>()?;
    let deriver = match derive {
        Some(opts) => Some(Deriver::new(&handle.basis()?, opts)),
        None => None,
    };
    let mut tally = OracleTally::default();
    let probe = |tally: &mut OracleTally, id: Identity, by_free: bool| -> Result<(), VarietyError> {
        tally.identities += 1;
        let decided = holds(handle, &id)?;
        if decided != by_free {
            tally.disagreements.push(id.render());
        }
        if let (Some(d), false) = (&deriver, decided) {
            tally.derive_calls += 1;
            if let Verdict::Proved(_) = d.derive(&id)? {
                tally.unsound_proofs.push(id.render());
            }
        }
        Ok(())
    };
    for (i, w) in words.iter().enumerate() {
        probe(&mut tally, Identity::Zero(w.clone()), values[i] == free.zero())?;
        for (j, v) in words.iter().enumerate().skip(i + 1) {
            probe(&mut tally, Identity::Pair(w.clone(), v.clone()), values[i] == values[j])?;
        }
    }
    Ok(tally)
}

pub fn oracles(max_len: usize, letters: usize, derive: Option<&DeriveOptions>) -> Result<SuiteReport, VarietyError> {
    if !(1..=4).contains(&letters) || !(1..=5).contains(&max_len) {
        return Err(VarietyError::InvalidParameters(format!(
            "oracle sweep is limited to 4 letters and length 5, got {letters} and {max_len}"
        )));
    }
    let mut report = SuiteReport::new("oracles");
    for h in oracle_handles(4)? {
        let t = oracle_sweep(&h, max_len, letters, derive)?;
        let first: Vec<&String> = t.disagreements.iter().chain(&t.unsound_proofs).take(5).collect();
        report.check(
            h.name(),
            t.disagreements.is_empty() && t.unsound_proofs.is_empty(),
            json!({
                "identities": t.identities,
                "disagreements": t.disagreements.len(),
                "derive_calls": t.derive_calls,
                "unsound_proofs": t.unsound_proofs.len(),
                "examples": first,
            }),
        );
    }
    Ok(report)
}

