use proptest::prelude::*;
use varlat_core::deduction::{derive, zero_member, DeriveOptions, Term, Verdict};
use varlat_core::perm::all_permutations;
use varlat_core::unary::{normal_word, normalize_single_letter_unary};
use varlat_core::varieties::{holds, holds_with_semilattices, is_zero, perm_group};
use varlat_core::words::{equivalent, incomparable, leq, pattern_leq, Item};
use varlat_core::{Basis, Identity, Letter, Permutation, Subgroup, Substitution, VarietyHandle, Word};

fn word_from(codes: &[u8]) -> Word {
    Word::from_letters(codes.iter().map(|&c| Letter::indexed(c as usize + 1)).collect()).unwrap()
}

fn word(max_len: usize, letters: u8) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..letters, 1..=max_len).prop_map(|c| word_from(&c))
}

/// Unary words over one letter with at most `size` letter and bar nodes.
fn unary_word(size: u32) -> impl Strategy<Value = Word> {
    let x = Word::parse("x").unwrap();
    let leaf = Just(x).boxed();
    leaf.prop_recursive(size, size * 2, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Word::bar),
            (inner.clone(), inner).prop_map(|(a, b)| a.concat(&b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn render_parse_round_trip(w in word(8, 4)) {
        prop_assert_eq!(Word::parse(&w.render()).unwrap(), w);
    }

    #[test]
    fn unary_render_round_trip(w in unary_word(6)) {
        prop_assert_eq!(Word::parse(&w.render()).unwrap(), w);
    }

    #[test]
    fn same_shape_words_are_incomparable(
        codes in prop::collection::vec(0u8..4, 2..=6),
        shuffle in prop::collection::vec(any::<prop::sample::Index>(), 6),
        tweak in any::<(prop::sample::Index, prop::sample::Index)>(),
    ) {
        let u = word_from(&codes);
        let mut other = codes.clone();
        for (i, ix) in shuffle.iter().enumerate().take(other.len()) {
            let j = ix.index(other.len());
            other.swap(i, j);
        }
        let at = tweak.0.index(other.len());
        other[at] = codes[tweak.1.index(codes.len())];
        let v = word_from(&other);
        prop_assume!(u.content() == v.content());
        prop_assume!(!equivalent(&u, &v).unwrap());
        prop_assert!(incomparable(&u, &v).unwrap(), "{} vs {}", u, v);
    }

    #[test]
    fn containment_is_reflexive(u in word(6, 3)) {
        prop_assert!(leq(&u, &u).unwrap());
    }

    #[test]
    fn containment_witnesses_compose(u in word(3, 2), v in word(5, 3), w in word(7, 3)) {
        let (Some(a), Some(b)) = (pattern_leq(&u, &v).unwrap(), pattern_leq(&v, &w).unwrap()) else {
            return Ok(());
        };
        // w = c η(l ξ(u) r) d, so ξ then η embeds u with contexts c η(l), η(r) d.
        let eta = |ls: &[Letter]| -> Vec<Letter> {
            ls.iter()
                .flat_map(|l| b.substitution.get(l).unwrap().letters().unwrap().into_iter().cloned().collect::<Vec<_>>())
                .collect()
        };
        let sigma = a.substitution.then(&b.substitution).unwrap();
        let mut letters = b.left.clone();
        letters.extend(eta(&a.left));
        letters.extend(u.substitute(&sigma).unwrap().letters().unwrap().into_iter().cloned());
        letters.extend(eta(&a.right));
        letters.extend(b.right.clone());
        prop_assert_eq!(Word::from_letters(letters).unwrap(), w.clone());
        prop_assert!(leq(&u, &w).unwrap());
    }

    #[test]
    fn equivalence_is_mutual_containment(u in word(5, 3), v in word(5, 3)) {
        prop_assert_eq!(
            equivalent(&u, &v).unwrap(),
            leq(&u, &v).unwrap() && leq(&v, &u).unwrap()
        );
    }

    #[test]
    fn substitution_composes(
        w in word(5, 3),
        s in prop::collection::vec(word(3, 3), 3),
        t in prop::collection::vec(word(2, 3), 3),
    ) {
        let map = |ws: &[Word]| Substitution::from_pairs(
            ws.iter().enumerate().map(|(i, x)| (Letter::indexed(i + 1), x.clone())),
        );
        let (sigma, tau) = (map(&s), map(&t));
        let two_steps = w.substitute(&sigma).unwrap().substitute(&tau).unwrap();
        prop_assert_eq!(w.substitute(&sigma.then(&tau).unwrap()).unwrap(), two_steps);
    }

    #[test]
    fn permutational_implies_substitutive(u in word(5, 5), v in word(5, 5)) {
        let p = Identity::Pair(u, v).predicates();
        if p.permutational.is_some() {
            prop_assert!(p.substitutive && p.balanced);
        }
    }

    #[test]
    fn zero_member_covers_proved_zero_goals(
        zs in prop::collection::vec(word(3, 2), 1..=3),
        w in word(5, 3),
    ) {
        let basis = Basis::new(zs.iter().cloned().map(Identity::Zero).collect()).unwrap();
        let verdict = derive(&basis, &Identity::Zero(w.clone()), &DeriveOptions::default()).unwrap();
        let member = zero_member(&zs, &w).unwrap();
        if let Verdict::Proved(trace) = &verdict {
            trace.replay(&basis).unwrap();
            prop_assert!(member.is_some());
        }
        // A single absorbing step realizes any witness.
        prop_assert_eq!(verdict.is_proved(), member.is_some());
    }

    #[test]
    fn proofs_replay_and_compose(a in word(4, 2), b in word(4, 2), c in word(4, 2)) {
        let basis = Basis::parse(&["x y = y x", "x^3 = x"]).unwrap();
        let opts = DeriveOptions { depth_bound: 6, size_bound: Some(6), literal_zero: false };
        let ab = derive(&basis, &Identity::Pair(a.clone(), b.clone()), &opts).unwrap();
        let bc = derive(&basis, &Identity::Pair(b.clone(), c.clone()), &opts).unwrap();
        let ba = derive(&basis, &Identity::Pair(b.clone(), a.clone()), &opts).unwrap();
        prop_assert_eq!(ab.is_proved(), ba.is_proved());
        if let (Verdict::Proved(t1), Verdict::Proved(t2)) = (&ab, &bc) {
            t1.replay(&basis).unwrap();
            t2.replay(&basis).unwrap();
            let summed = DeriveOptions { depth_bound: 12, ..opts };
            let ac = derive(&basis, &Identity::Pair(a.clone(), c.clone()), &summed).unwrap();
            prop_assert!(ac.is_proved());
        }
    }

    #[test]
    fn unary_normal_form_is_idempotent(w in unary_word(8)) {
        prop_assume!(w.has_bar());
        let (p, q) = normalize_single_letter_unary(&w).unwrap();
        prop_assert!(q >= 1);
        let x = Letter::new("x").unwrap();
        prop_assert_eq!(normalize_single_letter_unary(&normal_word(&x, p, q)).unwrap(), (p, q));
    }
}

proptest! {
    #[test]
    fn semilattice_guard_rejects_content_mismatch(u in word(5, 3), v in word(5, 3), which in 0usize..16) {
        prop_assume!(u.content() != v.content());
        let h = &family_handles()[which % family_handles().len()];
        prop_assert!(!holds_with_semilattices(h, &Identity::Pair(u, v)).unwrap());
    }
}

fn family_handles() -> Vec<VarietyHandle> {
    let mut out = Vec::new();
    for n in 2..=5 {
        for m in 2..=n {
            out.push(VarietyHandle::x(m, n).unwrap());
            out.push(VarietyHandle::y(m, n).unwrap());
        }
    }
    out
}

#[test]
fn linear_identities_split() {
    // x1⋯xn ≈ v holds only as a permutational identity or with both sides zero.
    let letters: Vec<Letter> = (1..=4).map(Letter::indexed).collect();
    for h in family_handles() {
        for n in 1..=4 {
            let lhs = Word::from_letters(letters[..n].to_vec()).unwrap();
            for v in varlat_core::words::words_up_to(&letters, 4) {
                let id = Identity::Pair(lhs.clone(), v.clone());
                if holds(&h, &id).unwrap() && lhs != v {
                    let perm = id.predicates().permutational.is_some();
                    let zeros = is_zero(&h, &lhs).unwrap() && is_zero(&h, &v).unwrap();
                    assert!(perm || zeros, "{h}: {id}");
                }
            }
        }
    }
}

#[test]
fn family_perm_groups_are_all_or_nothing() {
    for h in family_handles() {
        for k in 1..=5 {
            let g = perm_group(&h, k).unwrap();
            assert!(g.is_trivial() || g == Subgroup::symmetric(k), "{h}, k = {k}");
        }
    }
}

#[test]
fn bar_words_are_zero_in_nil_handles() {
    let words = ["~(x)", "x ~(y)", "~(x y) x", "~(~(x))"];
    let mut handles = family_handles();
    handles.push(VarietyHandle::parse("D:3:(12)").unwrap());
    handles.push(VarietyHandle::Trivial);
    for h in &handles {
        for w in words {
            let w = Word::parse(w).unwrap();
            assert!(is_zero(h, &w).unwrap(), "{h}: {w}");
        }
    }
}

#[test]
fn window_rewrites_include_whole_word() {
    let id = Identity::permutational(&Permutation::parse_cycles(3, "(12)").unwrap());
    let out = varlat_core::deduction::one_step_rewrites(&Word::parse("x1 x2 x3 x4").unwrap(), &id, 4).unwrap();
    let expect: Vec<Term> = ["x2 x1 x3 x4", "x1 x3 x2 x4"]
        .iter()
        .map(|s| Term::Word(Word::parse(s).unwrap()))
        .collect();
    for e in &expect {
        assert!(out.contains(e), "{e}");
    }
    assert!(out.iter().all(|t| matches!(t, Term::Word(w) if w.items().iter().all(|i| matches!(i, Item::Letter(_))))));
}

#[test]
fn perm_group_of_symmetric_basis() {
    for p in all_permutations(3) {
        let id = Identity::permutational(&p);
        let pred = id.predicates();
        assert_eq!(pred.permutational.is_some(), !p.is_identity());
    }
}

#[test]
fn family_perm_groups_switch_on_at_m() {
    for n in 2..=5 {
        for m in 2..=n {
            for h in [VarietyHandle::x(m, n).unwrap(), VarietyHandle::y(m, n).unwrap()] {
                for k in 2..n {
                    let full = perm_group(&h, k).unwrap() == Subgroup::symmetric(k);
                    assert_eq!(full, k >= m, "{h}, k = {k}");
                }
            }
        }
    }
}
