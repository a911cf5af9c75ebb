//! Decidable nil-semigroup variety handles.
//!
//! - `X_{m,n}`: `x²y ≈ xyx ≈ yx² ≈ 0`, all permutational identities of
//!   length `m`, and `x1⋯xn ≈ 0`; either index may be infinite.
//! - `Y_{m,n}`: `X_{m,n}` with `x² ≈ 0` added. `X_{2,2}` and `Y_{2,2}`
//!   coincide and are stored as `Y_{2,2}`.
//! - `D(G, n)`: `x1⋯x_{n+1} ≈ 0`, `w ≈ 0` for every length-`n` word on fewer
//!   than `n` letters, and `p_n[π]` for `π ∈ G`.
//!
//! Every handle except [`VarietyHandle::RawBasis`] has a word problem
//! decided by [`holds`]; [`free_object`] builds the relatively free object
//! by an independent route and serves as its oracle.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::deduction::{derive, Basis, DeriveOptions, Verdict};
use crate::lattice::{FiniteLattice, LatticeError};
use crate::perm::{all_permutations, PermError, Permutation, Subgroup};
use crate::words::{leq, patterns_up_to, words_up_to, Identity, Letter, Word, WordError, WordLength};

pub use crate::unary::{normal_word, normalize_single_letter_unary, UnaryError};

/// Largest relatively free object [`free_object`] will tabulate.
pub const MAX_FREE_ELEMENTS: usize = 4096;
/// Largest word list [`bounded_theory`] will partition.
pub const MAX_THEORY_WORDS: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum VarietyError {
    #[error("invalid family indices: {0}")]
    InvalidParameters(String),
    #[error("operation is not available for this kind of handle")]
    UnsupportedKind,
    #[error("bounded deduction was inconclusive")]
    Undecided,
    #[error("object too large ({0} elements)")]
    TooLarge(usize),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("cannot parse handle: {0}")]
    Syntax(String),
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A family index: finite, or the symbolic `∞` above every finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bound {
    Finite(usize),
    Infinite,
}

impl Bound {
    fn admits(self, k: usize) -> bool {
        match self {
            Bound::Finite(b) => k < b,
            Bound::Infinite => true,
        }
    }

    fn reaches(self, k: usize) -> bool {
        !self.admits(k)
    }

    pub fn parse(text: &str) -> Result<Bound, VarietyError> {
        let t = text.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(Bound::Infinite);
        }
        t.parse::<usize>()
            .map(Bound::Finite)
            .map_err(|_| VarietyError::Syntax(format!("bad index {t:?}")))
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(k) => write!(f, "{k}"),
            Bound::Infinite => f.write_str("inf"),
        }
    }
}

/// `Y` sits below `X` at equal indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyKind {
    Y,
    X,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyHandle {
    Trivial,
    Family { kind: FamilyKind, m: Bound, n: Bound },
    SubgroupDerived { group: Subgroup, n: usize },
    RawBasis(Basis),
}

impl VarietyHandle {
    /// Validated and canonical family member.
    pub fn family(kind: FamilyKind, m: Bound, n: Bound) -> Result<Self, VarietyError> {
        if m < Bound::Finite(2) || n < m {
            return Err(VarietyError::InvalidParameters(format!("need 2 <= m <= n, got m={m}, n={n}")));
        }
        let kind = if (m, n) == (Bound::Finite(2), Bound::Finite(2)) { FamilyKind::Y } else { kind };
        Ok(VarietyHandle::Family { kind, m, n })
    }

    pub fn x(m: usize, n: usize) -> Result<Self, VarietyError> {
        Self::family(FamilyKind::X, Bound::Finite(m), Bound::Finite(n))
    }

    pub fn y(m: usize, n: usize) -> Result<Self, VarietyError> {
        Self::family(FamilyKind::Y, Bound::Finite(m), Bound::Finite(n))
    }

    pub fn subgroup_derived(group: Subgroup) -> Self {
        let n = group.degree();
        VarietyHandle::SubgroupDerived { group, n }
    }

    pub fn is_decidable(&self) -> bool {
        !matches!(self, VarietyHandle::RawBasis(_))
    }

    /// Parses `T`, `X:m,n`, `Y:m,n` (`inf` allowed) or `D:n:<gens>` with
    /// cycle-notation generators separated by `;`.
    pub fn parse(text: &str) -> Result<Self, VarietyError> {
        let t = text.trim();
        if t == "T" {
            return Ok(VarietyHandle::Trivial);
        }
        let bad = || VarietyError::Syntax(format!("unrecognized handle {t:?}"));
        let (head, rest) = t.split_once(':').ok_or_else(bad)?;
        match head {
            "X" | "Y" => {
                let (m, n) = rest.split_once(',').ok_or_else(bad)?;
                let kind = if head == "X" { FamilyKind::X } else { FamilyKind::Y };
                Self::family(kind, Bound::parse(m)?, Bound::parse(n)?)
            }
            "D" => {
                let (n, gens) = rest.split_once(':').unwrap_or((rest, ""));
                let n: usize = n.trim().parse().map_err(|_| bad())?;
                if n == 0 {
                    return Err(VarietyError::Perm(PermError::ZeroDegree));
                }
                let gens = gens
                    .split(';')
                    .map(str::trim)
                    .filter(|g| !g.is_empty())
                    .map(|g| Permutation::parse_cycles(n, g))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Self::subgroup_derived(Subgroup::generated(n, &gens)?))
            }
            _ => Err(bad()),
        }
    }

    /// Inverse of [`VarietyHandle::parse`]; raw bases render as `basis`.
    pub fn spec_string(&self) -> String {
        match self {
            VarietyHandle::Trivial => "T".to_string(),
            VarietyHandle::Family { kind, m, n } => {
                format!("{}:{m},{n}", if *kind == FamilyKind::X { "X" } else { "Y" })
            }
            VarietyHandle::SubgroupDerived { group, n } => {
                let gens: Vec<String> = generating_set(group).iter().map(|p| p.to_string()).collect();
                format!("D:{n}:{}", gens.join(";"))
            }
            VarietyHandle::RawBasis(_) => "basis".to_string(),
        }
    }

    /// Conventional name, e.g. `X_{3,inf}`, `X_{2,2}=Y_{2,2}`, `D(C_123,3)`.
    pub fn name(&self) -> String {
        match self {
            VarietyHandle::Trivial => "T".to_string(),
            VarietyHandle::Family { m: Bound::Finite(2), n: Bound::Finite(2), .. } => {
                "X_{2,2}=Y_{2,2}".to_string()
            }
            VarietyHandle::Family { kind, m, n } => {
                format!("{}_{{{m},{n}}}", if *kind == FamilyKind::X { "X" } else { "Y" })
            }
            VarietyHandle::SubgroupDerived { group, n } => {
                let g = group
                    .conventional_name()
                    .unwrap_or_else(|| format!("<order {}>", group.order()));
                format!("D({g},{n})")
            }
            VarietyHandle::RawBasis(b) => {
                let ids: Vec<String> = b.identities().iter().map(Identity::render).collect();
                format!("var{{{}}}", ids.join(", "))
            }
        }
    }

    /// A finite identity basis, used by deduction-based cross-checks.
    pub fn basis(&self) -> Result<Basis, VarietyError> {
        let mut ids = Vec::new();
        let linear = |k: usize| Word::from_letters((1..=k).map(Letter::indexed).collect()).expect("k >= 1");
        match self {
            VarietyHandle::Trivial => ids.push(Identity::parse("x = y")?),
            VarietyHandle::Family { kind, m, n } => {
                for z in ["x^2 y = 0", "x y x = 0", "y x^2 = 0"] {
                    ids.push(Identity::parse(z)?);
                }
                if let Bound::Finite(n) = n {
                    ids.push(Identity::Zero(linear(*n)));
                }
                if let Bound::Finite(m) = m {
                    if n.admits(*m) {
                        ids.extend(permutational_basis(&Subgroup::symmetric(*m)));
                    }
                }
                if *kind == FamilyKind::Y {
                    ids.push(Identity::parse("x^2 = 0")?);
                }
            }
            VarietyHandle::SubgroupDerived { group, n } => {
                ids.push(Identity::Zero(linear(n + 1)));
                for p in patterns_up_to(*n, n - 1) {
                    if p.items().len() == *n {
                        ids.push(Identity::Zero(p));
                    }
                }
                ids.extend(permutational_basis(group));
            }
            VarietyHandle::RawBasis(b) => return Ok(b.clone()),
        }
        Ok(Basis::new(ids)?)
    }
}

impl fmt::Display for VarietyHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn permutational_basis(group: &Subgroup) -> Vec<Identity> {
    group
        .members()
        .iter()
        .filter(|p| !p.is_identity())
        .map(Identity::permutational)
        .collect()
}

/// Greedy small generating set, scanning members in canonical order.
pub fn generating_set(group: &Subgroup) -> Vec<Permutation> {
    let n = group.degree();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span = Subgroup::trivial(n);
    for p in group.members() {
        if !span.contains(p) {
            gens.push(p.clone());
            span = Subgroup::generated(n, &gens).expect("same degree");
        }
    }
    gens
}

// ---------------------------------------------------------------------------
// Word problem.

/// Whether `w` equals zero in the handle. Bar-containing words are zero in
/// every nil handle.
pub fn is_zero(v: &VarietyHandle, w: &Word) -> Result<bool, VarietyError> {
    let len = match w.length() {
        WordLength::Infinite => return Ok(true),
        WordLength::Finite(k) => k,
    };
    Ok(match v {
        VarietyHandle::Trivial => true,
        VarietyHandle::Family { kind, n, .. } => {
            n.reaches(len)
                || (!w.is_linear() && (*kind == FamilyKind::Y || !w.is_square_of_letter()))
        }
        VarietyHandle::SubgroupDerived { n, .. } => {
            len > *n || (len == *n && w.content().len() < *n)
        }
        VarietyHandle::RawBasis(_) => return Err(VarietyError::UnsupportedKind),
    })
}

/// Decides whether `v` satisfies `id`. Raw bases fall back on bounded
/// deduction and report [`VarietyError::Undecided`] when it is inconclusive.
pub fn holds(v: &VarietyHandle, id: &Identity) -> Result<bool, VarietyError> {
    if let VarietyHandle::RawBasis(b) = v {
        return match derive(b, id, &DeriveOptions::default())? {
            Verdict::Proved(_) => Ok(true),
            Verdict::Unknown => Err(VarietyError::Undecided),
        };
    }
    let (u, w) = match id {
        Identity::Zero(w) => return is_zero(v, w),
        Identity::Pair(u, w) => (u, w),
    };
    if is_zero(v, u)? && is_zero(v, w)? {
        return Ok(true);
    }
    if u == w {
        return Ok(true);
    }
    if !u.is_linear() || !w.is_linear() || u.content() != w.content() {
        return Ok(false);
    }
    let k = u.items().len();
    Ok(match v {
        VarietyHandle::Family { m, .. } => m.reaches(k),
        VarietyHandle::SubgroupDerived { group, n } => {
            k == *n && position_permutation(u, w).is_some_and(|p| group.contains(&p))
        }
        _ => false,
    })
}

/// For linear `u`, `v` of equal length and content: `π` with `v[i] = u[iπ]`.
pub fn position_permutation(u: &Word, v: &Word) -> Option<Permutation> {
    crate::words::permutation_between(u, v)
}

/// `Perm_k(V)`: the `π ∈ S_k` with `V ⊨ p_k[π]`.
pub fn perm_group(v: &VarietyHandle, k: usize) -> Result<Subgroup, VarietyError> {
    if k == 0 {
        return Err(PermError::ZeroDegree.into());
    }
    if k > 6 {
        return Err(PermError::DegreeTooLarge(k).into());
    }
    let mut members = Vec::new();
    for p in all_permutations(k) {
        if holds(v, &Identity::permutational(&p))? {
            members.push(p);
        }
    }
    Ok(Subgroup::from_members(k, members)?)
}

/// Identities of `V ∨ SL`: those of `V` whose sides have equal content.
/// Zero identities never hold in a join with semilattices.
pub fn holds_with_semilattices(v: &VarietyHandle, id: &Identity) -> Result<bool, VarietyError> {
    let sl = match id {
        Identity::Pair(u, w) => u.content() == w.content(),
        Identity::Zero(_) => false,
    };
    Ok(sl && holds(v, id)?)
}

// ---------------------------------------------------------------------------
// Family lattice.

fn family_parts(v: &VarietyHandle) -> Result<Option<(FamilyKind, Bound, Bound)>, VarietyError> {
    match v {
        VarietyHandle::Trivial => Ok(None),
        VarietyHandle::Family { kind, m, n } => Ok(Some((*kind, *m, *n))),
        _ => Err(VarietyError::UnsupportedKind),
    }
}

pub fn family_meet(a: &VarietyHandle, b: &VarietyHandle) -> Result<VarietyHandle, VarietyError> {
    match (family_parts(a)?, family_parts(b)?) {
        (None, _) | (_, None) => Ok(VarietyHandle::Trivial),
        (Some((k1, m1, n1)), Some((k2, m2, n2))) => {
            let kind = if k1 == FamilyKind::Y || k2 == FamilyKind::Y { FamilyKind::Y } else { FamilyKind::X };
            VarietyHandle::family(kind, m1.min(m2), n1.min(n2))
        }
    }
}

pub fn family_join(a: &VarietyHandle, b: &VarietyHandle) -> Result<VarietyHandle, VarietyError> {
    match (family_parts(a)?, family_parts(b)?) {
        (None, _) => Ok(b.clone()),
        (_, None) => Ok(a.clone()),
        (Some((k1, m1, n1)), Some((k2, m2, n2))) => {
            let kind = if k1 == FamilyKind::Y && k2 == FamilyKind::Y { FamilyKind::Y } else { FamilyKind::X };
            VarietyHandle::family(kind, m1.max(m2), n1.max(n2))
        }
    }
}

/// Containment between family members and `T`.
pub fn family_leq(a: &VarietyHandle, b: &VarietyHandle) -> Result<bool, VarietyError> {
    Ok(match (family_parts(a)?, family_parts(b)?) {
        (None, _) => true,
        (_, None) => false,
        (Some((k1, m1, n1)), Some((k2, m2, n2))) => k1 <= k2 && m1 <= m2 && n1 <= n2,
    })
}

/// Truncation of the lattice of `T`, `X_{m,n}`, `Y_{m,n}`: all finite
/// indices up to `cap` plus the infinite rails `X_{m,inf}`, `Y_{m,inf}`
/// (`2 <= m <= cap`) and `X_{inf,inf}`, `Y_{inf,inf}`. Handles are listed in
/// lattice index order.
pub fn figure1_lattice(cap: usize) -> Result<(FiniteLattice, Vec<VarietyHandle>), VarietyError> {
    if !(2..=8).contains(&cap) {
        return Err(VarietyError::InvalidParameters(format!("cap must lie in 2..=8, got {cap}")));
    }
    let mut handles = vec![VarietyHandle::Trivial];
    let mut indices: Vec<Bound> = (2..=cap).map(Bound::Finite).collect();
    indices.push(Bound::Infinite);
    for kind in [FamilyKind::Y, FamilyKind::X] {
        for &n in &indices {
            for &m in indices.iter().filter(|&&m| m <= n) {
                let h = VarietyHandle::family(kind, m, n)?;
                if !handles.contains(&h) {
                    handles.push(h);
                }
            }
        }
    }
    let labels: Vec<String> = handles.iter().map(VarietyHandle::name).collect();
    let lattice = FiniteLattice::from_order(
        handles.len(),
        |i, j| family_leq(&handles[i], &handles[j]).expect("family handles"),
        Some(labels),
    )?;
    Ok((lattice, handles))
}

// ---------------------------------------------------------------------------
// Relatively free objects.

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Nf {
    Word(Vec<u8>),
    Zero,
}

/// Relatively free object on `x1..xk`: normal-form words plus zero, with the
/// full multiplication table.
#[derive(Clone, Debug)]
pub struct FreeObject {
    generators: Vec<Letter>,
    elements: Vec<Option<Word>>,
    table: Vec<u32>,
    generator_index: Vec<usize>,
    zero: usize,
}

impl FreeObject {
    pub fn size(&self) -> usize {
        self.elements.len()
    }

    /// Element normal forms; `None` is the zero.
    pub fn elements(&self) -> &[Option<Word>] {
        &self.elements
    }

    pub fn generators(&self) -> &[Letter] {
        &self.generators
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn nonzero_count(&self) -> usize {
        self.size() - 1
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size() + b] as usize
    }

    pub fn generator(&self, i: usize) -> usize {
        self.generator_index[i]
    }

    /// Value of `w` under `x_i ↦ x_i`; bars evaluate to zero.
    pub fn evaluate(&self, w: &Word) -> Result<usize, VarietyError> {
        let mut acc: Option<usize> = None;
        for item in w.items() {
            let value = match item {
                crate::words::Item::Letter(l) => {
                    let i = self
                        .generators
                        .iter()
                        .position(|g| g == l)
                        .ok_or_else(|| WordError::UndefinedLetter(l.clone()))?;
                    self.generator_index[i]
                }
                crate::words::Item::Bar(_) => self.zero,
            };
            acc = Some(match acc {
                None => value,
                Some(a) => self.mul(a, value),
            });
        }
        Ok(acc.expect("nonempty word"))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.size();
        (0..n).all(|a| {
            (0..n).all(|b| {
                let ab = self.mul(a, b);
                (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
            })
        })
    }

    pub fn zero_is_absorbing(&self) -> bool {
        (0..self.size()).all(|a| self.mul(a, self.zero) == self.zero && self.mul(self.zero, a) == self.zero)
    }

    /// The multiplication table as rows of element indices.
    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        let n = self.size();
        (0..n).map(|a| (0..n).map(|b| self.mul(a, b)).collect()).collect()
    }
}

/// Product of two normal forms, computed per handle kind without reference
/// to [`holds`].
fn nf_mul(v: &VarietyHandle, a: &Nf, b: &Nf) -> Nf {
    let (Nf::Word(a), Nf::Word(b)) = (a, b) else {
        return Nf::Zero;
    };
    match v {
        VarietyHandle::Trivial | VarietyHandle::RawBasis(_) => Nf::Zero,
        VarietyHandle::Family { kind, m, n } => {
            let square = |w: &[u8]| w.len() == 2 && w[0] == w[1];
            if square(a) || square(b) {
                return Nf::Zero;
            }
            if a.iter().any(|x| b.contains(x)) {
                // x · x survives in X_{m,n} for n >= 3; every other overlap
                // makes a non-linear word other than a square.
                return if a.len() == 1 && b.len() == 1 && *kind == FamilyKind::X && n.admits(2) {
                    Nf::Word(vec![a[0], a[0]])
                } else {
                    Nf::Zero
                };
            }
            let mut c = a.clone();
            c.extend_from_slice(b);
            if n.reaches(c.len()) {
                return Nf::Zero;
            }
            if m.reaches(c.len()) {
                c.sort_unstable();
            }
            Nf::Word(c)
        }
        VarietyHandle::SubgroupDerived { group, n } => {
            let mut c = a.clone();
            c.extend_from_slice(b);
            match c.len().cmp(n) {
                Ordering::Less => Nf::Word(c),
                Ordering::Greater => Nf::Zero,
                Ordering::Equal => {
                    let distinct: BTreeSet<u8> = c.iter().copied().collect();
                    if distinct.len() < *n {
                        return Nf::Zero;
                    }
                    let best = group
                        .members()
                        .iter()
                        .map(|p| (1..=*n).map(|i| c[p.apply(i) - 1]).collect::<Vec<u8>>())
                        .min()
                        .expect("groups are nonempty");
                    Nf::Word(best)
                }
            }
        }
    }
}

pub fn free_object(v: &VarietyHandle, k: usize) -> Result<FreeObject, VarietyError> {
    if !v.is_decidable() {
        return Err(VarietyError::UnsupportedKind);
    }
    if k == 0 || k > 4 {
        return Err(VarietyError::InvalidParameters(format!("generator count must lie in 1..=4, got {k}")));
    }
    let gens: Vec<Nf> = (0..k as u8)
        .map(|i| match v {
            VarietyHandle::Trivial => Nf::Zero,
            _ => Nf::Word(vec![i]),
        })
        .collect();
    // Closure of the generators under right multiplication by generators.
    let mut seen: BTreeSet<Nf> = gens.iter().cloned().collect();
    seen.insert(Nf::Zero);
    let mut queue: Vec<Nf> = gens.clone();
    while let Some(e) = queue.pop() {
        for g in &gens {
            let p = nf_mul(v, &e, g);
            if seen.insert(p.clone()) {
                if seen.len() > MAX_FREE_ELEMENTS {
                    return Err(VarietyError::TooLarge(seen.len()));
                }
                queue.push(p);
            }
        }
    }
    let mut order: Vec<Nf> = seen.into_iter().collect();
    order.sort_by(|a, b| match (a, b) {
        (Nf::Zero, Nf::Zero) => Ordering::Equal,
        (Nf::Zero, _) => Ordering::Greater,
        (_, Nf::Zero) => Ordering::Less,
        (Nf::Word(x), Nf::Word(y)) => (x.len(), x).cmp(&(y.len(), y)),
    });
    let index: BTreeMap<&Nf, usize> = order.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let size = order.len();
    let mut table = vec![0u32; size * size];
    for (i, a) in order.iter().enumerate() {
        for (j, b) in order.iter().enumerate() {
            table[i * size + j] = index[&nf_mul(v, a, b)] as u32;
        }
    }
    let generators: Vec<Letter> = (1..=k).map(Letter::indexed).collect();
    let elements = order
        .iter()
        .map(|e| match e {
            Nf::Zero => None,
            Nf::Word(w) => Word::from_letters(w.iter().map(|&c| generators[c as usize].clone()).collect()),
        })
        .collect();
    let generator_index = gens.iter().map(|g| index[g]).collect();
    Ok(FreeObject {
        generators,
        elements,
        table,
        generator_index,
        zero: index[&Nf::Zero],
    })
}

// ---------------------------------------------------------------------------
// Bounded theories.

/// Partition of a word list into classes of the handle's word problem.
/// Class ids are assigned in order of first appearance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundedTheory {
    words: Vec<Word>,
    class: Vec<usize>,
    zero_class: Option<usize>,
}

impl BoundedTheory {
    /// Builds a theory from any class labelling, renumbering canonically.
    pub fn from_labels<K: Ord + Clone>(words: Vec<Word>, labels: &[K], zero: Option<&K>) -> Self {
        let mut ids: BTreeMap<K, usize> = BTreeMap::new();
        let mut class = Vec::with_capacity(words.len());
        for l in labels {
            let next = ids.len();
            class.push(*ids.entry(l.clone()).or_insert(next));
        }
        let zero_class = zero.and_then(|z| ids.get(z).copied());
        BoundedTheory { words, class, zero_class }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn class_of(&self, i: usize) -> usize {
        self.class[i]
    }

    pub fn classes(&self) -> &[usize] {
        &self.class
    }

    pub fn zero_class(&self) -> Option<usize> {
        self.zero_class
    }

    pub fn class_count(&self) -> usize {
        self.class.iter().max().map_or(0, |m| m + 1)
    }

    pub fn same(&self, i: usize, j: usize) -> bool {
        self.class[i] == self.class[j]
    }

    /// Number of unordered pairs of distinct words identified.
    pub fn identified_pairs(&self) -> usize {
        let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
        for &c in &self.class {
            *sizes.entry(c).or_insert(0) += 1;
        }
        sizes.values().map(|s| s * (s - 1) / 2).sum()
    }

    fn check_same_words(&self, other: &BoundedTheory) -> Result<(), VarietyError> {
        if self.words != other.words {
            return Err(VarietyError::PreconditionFailed("theories over different word lists".into()));
        }
        Ok(())
    }

    /// Identities holding in both: the theory of the variety join.
    pub fn intersection(&self, other: &BoundedTheory) -> Result<BoundedTheory, VarietyError> {
        self.check_same_words(other)?;
        let labels: Vec<(usize, usize)> = self.class.iter().copied().zip(other.class.iter().copied()).collect();
        let zero = match (self.zero_class, other.zero_class) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        };
        Ok(BoundedTheory::from_labels(self.words.clone(), &labels, zero.as_ref()))
    }

    /// Transitive closure of the union: the bounded trace of the theory of
    /// the variety meet.
    pub fn union_closure(&self, other: &BoundedTheory) -> Result<BoundedTheory, VarietyError> {
        self.check_same_words(other)?;
        let offset = self.class_count();
        let mut parent: Vec<usize> = (0..offset + other.class_count()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (a, b) in self.class.iter().zip(&other.class) {
            let (ra, rb) = (find(&mut parent, *a), find(&mut parent, b + offset));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
        let labels: Vec<usize> = self.class.iter().map(|&a| find(&mut parent, a)).collect();
        let zero = self
            .zero_class
            .map(|z| find(&mut parent, z))
            .or_else(|| other.zero_class.map(|z| find(&mut parent, z + offset)));
        Ok(BoundedTheory::from_labels(self.words.clone(), &labels, zero.as_ref()))
    }

    /// Every identity of `self` holds in `other` (so `other ⊆ self` as
    /// varieties).
    pub fn is_refined_by(&self, other: &BoundedTheory) -> bool {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        self.class
            .iter()
            .zip(&other.class)
            .all(|(a, b)| *map.entry(*a).or_insert(*b) == *b)
    }

    /// First pair of words identified here but not in `other`.
    pub fn separating_pair(&self, other: &BoundedTheory) -> Option<(Word, Word)> {
        let mut first: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..self.words.len() {
            let j = *first.entry(self.class[i]).or_insert(i);
            if other.class[i] != other.class[j] {
                return Some((self.words[j].clone(), self.words[i].clone()));
            }
        }
        None
    }
}

/// Class key of a word: `None` for zero, else a canonical representative.
fn class_key(v: &VarietyHandle, w: &Word) -> Result<Option<Word>, VarietyError> {
    if is_zero(v, w)? {
        return Ok(None);
    }
    let k = w.items().len();
    Ok(Some(match v {
        VarietyHandle::Family { m, .. } if w.is_linear() && m.reaches(k) => {
            let mut letters: Vec<Letter> = w.letters().expect("linear").into_iter().cloned().collect();
            letters.sort();
            Word::from_letters(letters).expect("nonempty")
        }
        VarietyHandle::SubgroupDerived { group, n } if k == *n => {
            let letters: Vec<Letter> = w.letters().expect("semigroup word").into_iter().cloned().collect();
            group
                .members()
                .iter()
                .map(|p| Word::from_letters((1..=*n).map(|i| letters[p.apply(i) - 1].clone()).collect()).expect("n >= 1"))
                .min()
                .expect("groups are nonempty")
        }
        _ => w.clone(),
    }))
}

/// Partition of all semigroup words over `x1..x_{max_letters}` of length at
/// most `max_len`.
pub fn bounded_theory(v: &VarietyHandle, max_len: usize, max_letters: usize) -> Result<BoundedTheory, VarietyError> {
    if !v.is_decidable() {
        return Err(VarietyError::UnsupportedKind);
    }
    let total: usize = (1..=max_len).map(|l| max_letters.saturating_pow(l as u32)).sum();
    if total > MAX_THEORY_WORDS {
        return Err(VarietyError::TooLarge(total));
    }
    let letters: Vec<Letter> = (1..=max_letters).map(Letter::indexed).collect();
    let words = words_up_to(&letters, max_len);
    let keys = words.iter().map(|w| class_key(v, w)).collect::<Result<Vec<_>, _>>()?;
    Ok(BoundedTheory::from_labels(words, &keys, Some(&None)))
}

// ---------------------------------------------------------------------------
// Subgroup witness harness.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub n: usize,
    pub base: Subgroup,
    pub first: Subgroup,
    pub second: Subgroup,
    pub words_checked: usize,
    /// Intersections of the bounded theories agree, and equal that of
    /// `D(V ∧ G_i, n)`.
    pub joins_coincide: bool,
    /// Union closures agree, and equal the theory of `D(V ∨ G_i, n)`.
    pub meets_coincide: bool,
    /// An identity holding in exactly one of `D(G1, n)`, `D(G2, n)`.
    pub separating_identity: Option<Identity>,
    /// Permutational meet identities re-derived from the two bases.
    pub derivations_checked: usize,
    pub derivations_failed: Vec<Identity>,
    pub splice_failures: usize,
}

impl WitnessReport {
    pub fn confirmed(&self) -> bool {
        self.joins_coincide
            && self.meets_coincide
            && self.separating_identity.is_some()
            && self.derivations_failed.is_empty()
            && self.splice_failures == 0
    }
}

/// Builds `D(V,n)`, `D(G1,n)`, `D(G2,n)` for subgroups with equal joins and
/// meets against `V` and checks on bounded theories (length and letters up
/// to `n + 1`) that the variety joins and meets coincide while
/// `D(G1,n) ≠ D(G2,n)`.
pub fn subgroup_witness_harness(
    base: &Subgroup,
    first: &Subgroup,
    second: &Subgroup,
    opts: &DeriveOptions,
) -> Result<WitnessReport, VarietyError> {
    let n = base.degree();
    if !(3..=4).contains(&n) || first.degree() != n || second.degree() != n {
        return Err(VarietyError::PreconditionFailed(format!("subgroups of S_3 or S_4 required, got degree {n}")));
    }
    if first == second {
        return Err(VarietyError::PreconditionFailed("the two subgroups coincide".into()));
    }
    let join = base.join(first)?;
    let meet = base.meet(first)?;
    if join != base.join(second)? || meet != base.meet(second)? {
        return Err(VarietyError::PreconditionFailed(
            "the subgroups do not share join and meet with the base".into(),
        ));
    }
    let dv = VarietyHandle::subgroup_derived(base.clone());
    let d1 = VarietyHandle::subgroup_derived(first.clone());
    let d2 = VarietyHandle::subgroup_derived(second.clone());
    let (tv, t1, t2) = (
        bounded_theory(&dv, n + 1, n + 1)?,
        bounded_theory(&d1, n + 1, n + 1)?,
        bounded_theory(&d2, n + 1, n + 1)?,
    );
    let t_join_struct = bounded_theory(&VarietyHandle::subgroup_derived(meet), n + 1, n + 1)?;
    let t_meet_struct = bounded_theory(&VarietyHandle::subgroup_derived(join.clone()), n + 1, n + 1)?;

    let (j1, j2) = (tv.intersection(&t1)?, tv.intersection(&t2)?);
    let joins_coincide = j1 == j2 && j1 == t_join_struct;
    let (m1, m2) = (tv.union_closure(&t1)?, tv.union_closure(&t2)?);
    let meets_coincide = m1 == m2 && m1 == t_meet_struct;

    let separating_identity = first
        .members()
        .iter()
        .chain(second.members())
        .find(|p| first.contains(p) != second.contains(p))
        .map(Identity::permutational);

    // The meet's permutational identities must be derivable from the two
    // bases together, through linear words only, with spliceable traces.
    let mut derivations_checked = 0;
    let mut derivations_failed = Vec::new();
    let mut splice_failures = 0;
    for which in [&d1, &d2] {
        let basis = dv.basis()?.union(&which.basis()?);
        for p in join.members().iter().filter(|p| !p.is_identity()) {
            let goal = Identity::permutational(p);
            derivations_checked += 1;
            match derive(&basis, &goal, opts)? {
                Verdict::Proved(trace) => {
                    if trace.replay(&basis).is_err() || trace.splice_check() != Some(true) {
                        splice_failures += 1;
                    }
                }
                Verdict::Unknown => derivations_failed.push(goal),
            }
        }
    }

    Ok(WitnessReport {
        n,
        base: base.clone(),
        first: first.clone(),
        second: second.clone(),
        words_checked: tv.words().len(),
        joins_coincide,
        meets_coincide,
        separating_identity,
        derivations_checked,
        derivations_failed,
        splice_failures,
    })
}

// ---------------------------------------------------------------------------
// The variety U built from three pairwise incomparable words.

/// `u = x²y`, `v = yx²`, `w = xyx` and the ideal `I` of words strictly above
/// one of them in the containment preorder.
#[derive(Clone, Debug)]
pub struct IncomparableTriple {
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

impl Default for IncomparableTriple {
    fn default() -> Self {
        IncomparableTriple {
            u: Word::parse("x^2 y").expect("literal"),
            v: Word::parse("y x^2").expect("literal"),
            w: Word::parse("x y x").expect("literal"),
        }
    }
}

impl IncomparableTriple {
    /// `s ∈ I`: some word of the triple lies below `s` and `s` does not lie
    /// below it.
    pub fn in_ideal(&self, s: &Word) -> Result<bool, VarietyError> {
        for b in [&self.u, &self.v, &self.w] {
            if leq(b, s)? && !leq(s, b)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `t = φ(a)` and `s = φ(b)` for one letter bijection `φ`.
    fn same_renaming(a: &Word, b: &Word, s: &Word, t: &Word) -> bool {
        let (Some(la), Some(lb), Some(ls), Some(lt)) = (a.letters(), b.letters(), s.letters(), t.letters()) else {
            return false;
        };
        if la.len() != ls.len() || lb.len() != lt.len() {
            return false;
        }
        let mut phi: BTreeMap<&Letter, &Letter> = BTreeMap::new();
        let mut image: BTreeMap<&Letter, &Letter> = BTreeMap::new();
        for (x, y) in la.iter().zip(&ls).chain(lb.iter().zip(&lt)) {
            if *phi.entry(x).or_insert(y) != *y || *image.entry(y).or_insert(x) != *x {
                return false;
            }
        }
        true
    }

    /// Word problem of `U = var{s ≈ 0 : s ∈ I} ∧ var{u ≈ w}` as described
    /// by the structure lemma: trivial identities, pairs inside `I`, and
    /// `φ(u) ≈ φ(w)` in either order for letter bijections `φ`.
    pub fn holds_in_u(&self, s: &Word, t: &Word) -> Result<bool, VarietyError> {
        if s == t {
            return Ok(true);
        }
        if self.in_ideal(s)? && self.in_ideal(t)? {
            return Ok(true);
        }
        Ok(Self::same_renaming(&self.u, &self.w, s, t) || Self::same_renaming(&self.w, &self.u, s, t))
    }

    /// Basis for bounded deduction in `U`: `u ≈ w` and `s ≈ 0` for the
    /// members of `I` up to renaming with at most `max_len` letters.
    pub fn u_basis(&self, max_len: usize, max_letters: usize) -> Result<Basis, VarietyError> {
        let mut ids = vec![Identity::Pair(self.u.clone(), self.w.clone())];
        for s in patterns_up_to(max_len, max_letters) {
            if self.in_ideal(&s)? {
                ids.push(Identity::Zero(s));
            }
        }
        Ok(Basis::new(ids)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ULemmaReport {
    pub words: usize,
    pub pairs: usize,
    pub nontrivial_identities: usize,
    pub ideal_members: usize,
    /// Pairs where the deduction closure and the lemma's description differ.
    pub mismatches: Vec<(Word, Word)>,
}

/// Compares, over all words on `max_letters` letters of length at most
/// `max_len`, the identities of `U` obtained by closing the basis under
/// one-step rewriting with those predicted by the structure lemma.
pub fn verify_u_theory(max_len: usize, max_letters: usize) -> Result<ULemmaReport, VarietyError> {
    let triple = IncomparableTriple::default();
    let basis = triple.u_basis(max_len, max_letters)?;
    let letters: Vec<Letter> = ["x", "y", "z", "t"]
        .iter()
        .take(max_letters)
        .map(|s| Letter::new(s).expect("literal"))
        .chain((5..=max_letters).map(Letter::indexed))
        .collect();
    let closure = crate::deduction::closure_classes(&basis, &letters, max_len)?;
    let words = closure.words;
    let mut mismatches = Vec::new();
    let mut nontrivial = 0;
    let mut pairs = 0;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            pairs += 1;
            let derived = closure.class[i] == closure.class[j];
            let predicted = triple.holds_in_u(&words[i], &words[j])?;
            nontrivial += usize::from(predicted);
            if derived != predicted {
                mismatches.push((words[i].clone(), words[j].clone()));
            }
        }
    }
    let ideal_members = words
        .iter()
        .map(|w| triple.in_ideal(w))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter(|b| *b)
        .count();
    Ok(ULemmaReport {
        words: words.len(),
        pairs,
        nontrivial_identities: nontrivial,
        ideal_members,
        mismatches,
    })
}
