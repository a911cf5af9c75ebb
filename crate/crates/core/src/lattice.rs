//! Explicit finite lattices.
//!
//! A [`FiniteLattice`] stores its order as dense bit rows together with full
//! meet and join tables. The lattice axioms are checked once, at
//! construction; every other operation assumes a valid lattice.
//!
//! The special-element predicates are evaluated by exhausting every pair
//! `(y, z)` against the defining formulas, so a classification is exact for
//! any lattice that fits in memory.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::BitRow;

/// Which bound is missing for a pair of elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MissingBound {
    Meet,
    Join,
}

impl core::fmt::Display for MissingBound {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MissingBound::Meet => f.write_str("meet"),
            MissingBound::Join => f.write_str("join"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("cover relation contains a cycle through element {0}")]
    CycleDetected(usize),
    #[error("elements {0} and {1} have no {2}")]
    NotALattice(usize, usize, MissingBound),
    #[error("relation is not a partial order at ({0}, {1})")]
    NotAPartialOrder(usize, usize),
    #[error("cover ({0}, {1}) references an element outside the lattice")]
    IndexOutOfRange(usize, usize),
    #[error("label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("unknown element label {0:?}")]
    UnknownLabel(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// Five special-element flags of one lattice element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementClassification {
    pub element: usize,
    pub neutral: bool,
    pub distributive: bool,
    pub standard: bool,
    pub modular: bool,
    pub cancellable: bool,
}

impl ElementClassification {
    /// `standard => cancellable => modular` and
    /// `neutral => standard && distributive`.
    pub fn implication_chain_holds(&self) -> bool {
        (!self.standard || self.cancellable)
            && (!self.cancellable || self.modular)
            && (!self.neutral || (self.standard && self.distributive))
    }
}

/// Outcome of checking the neutral-atom equivalence on one lattice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NeutralAtomReport {
    /// Atoms that are neutral elements and were therefore checked.
    pub neutral_atoms: Vec<usize>,
    /// Number of `(atom, x)` combinations examined.
    pub checked: usize,
    pub violations: Vec<NeutralAtomViolation>,
}

impl NeutralAtomReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeutralAtomViolation {
    pub atom: usize,
    pub element: usize,
    pub cancellable: bool,
    pub join_with_atom_cancellable: bool,
    pub cancellable_on_filter: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    size: usize,
    up: Vec<BitRow>,
    down: Vec<BitRow>,
    meet: Vec<usize>,
    join: Vec<usize>,
    labels: Option<Vec<String>>,
}

impl FiniteLattice {
    /// Builds a lattice from a cover (or any acyclic generating) relation.
    /// Pairs are `(lower, upper)`.
    pub fn from_covers(
        size: usize,
        covers: &[(usize, usize)],
        labels: Option<Vec<String>>,
    ) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut succ = vec![Vec::new(); size];
        let mut indegree = vec![0usize; size];
        for &(lo, hi) in covers {
            if lo >= size || hi >= size {
                return Err(LatticeError::IndexOutOfRange(lo, hi));
            }
            if lo == hi {
                return Err(LatticeError::CycleDetected(lo));
            }
            succ[lo].push(hi);
            indegree[hi] += 1;
        }

        // Kahn's algorithm; anything left over sits on a cycle.
        let mut order = Vec::with_capacity(size);
        let mut ready: Vec<usize> = (0..size).filter(|&i| indegree[i] == 0).collect();
        while let Some(i) = ready.pop() {
            order.push(i);
            for &j in &succ[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(j);
                }
            }
        }
        if order.len() < size {
            let stuck = (0..size).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(LatticeError::CycleDetected(stuck));
        }

        let mut up = vec![BitRow::new(size); size];
        for &i in order.iter().rev() {
            let mut row = BitRow::new(size);
            row.set(i);
            for &j in &succ[i] {
                row.union_with(&up[j]);
            }
            up[i] = row;
        }
        Self::from_up_rows(up, labels)
    }

    /// Builds a lattice from labelled elements and labelled cover pairs.
    pub fn from_named_covers(
        names: Vec<String>,
        covers: &[(String, String)],
    ) -> Result<Self, LatticeError> {
        let mut index = BTreeMap::new();
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(LatticeError::DuplicateLabel(name.clone()));
            }
        }
        let lookup = |name: &String| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| LatticeError::UnknownLabel(name.clone()))
        };
        let pairs = covers
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>, LatticeError>>()?;
        Self::from_covers(names.len(), &pairs, Some(names))
    }

    /// Builds a lattice from an explicit order predicate `leq(i, j)`.
    pub fn from_order(
        size: usize,
        leq: impl Fn(usize, usize) -> bool,
        labels: Option<Vec<String>>,
    ) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut up = vec![BitRow::new(size); size];
        for (i, row) in up.iter_mut().enumerate() {
            for j in 0..size {
                if leq(i, j) {
                    row.set(j);
                }
            }
        }
        for i in 0..size {
            if !up[i].get(i) {
                return Err(LatticeError::NotAPartialOrder(i, i));
            }
            for j in up[i].iter() {
                if !up[j].is_subset(&up[i]) {
                    return Err(LatticeError::NotAPartialOrder(i, j));
                }
            }
        }
        Self::from_up_rows(up, labels)
    }

    fn from_up_rows(up: Vec<BitRow>, labels: Option<Vec<String>>) -> Result<Self, LatticeError> {
        let size = up.len();
        if let Some(names) = &labels {
            if names.len() != size {
                return Err(LatticeError::LabelCount {
                    expected: size,
                    got: names.len(),
                });
            }
            let mut seen = BTreeMap::new();
            for name in names {
                if seen.insert(name.as_str(), ()).is_some() {
                    return Err(LatticeError::DuplicateLabel(name.clone()));
                }
            }
        }
        let mut down = vec![BitRow::new(size); size];
        for (i, row) in up.iter().enumerate() {
            for j in row.iter() {
                if j != i && up[j].get(i) {
                    return Err(LatticeError::NotAPartialOrder(i, j));
                }
                down[j].set(i);
            }
        }

        let meet = bound_table(&down, MissingBound::Meet)?;
        let join = bound_table(&up, MissingBound::Join)?;
        Ok(FiniteLattice {
            size,
            up,
            down,
            meet,
            join,
            labels,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[i].as_str())
    }

    /// Label if present, otherwise the decimal index.
    pub fn name(&self, i: usize) -> String {
        match self.label(i) {
            Some(l) => String::from(l),
            None => format!("{i}"),
        }
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].get(y)
    }

    #[inline]
    pub fn meet(&self, x: usize, y: usize) -> usize {
        self.meet[x * self.size + y]
    }

    #[inline]
    pub fn join(&self, x: usize, y: usize) -> usize {
        self.join[x * self.size + y]
    }

    pub fn bottom(&self) -> usize {
        (0..self.size)
            .find(|&i| self.up[i].count() == self.size)
            .expect("finite lattice has a bottom")
    }

    pub fn top(&self) -> usize {
        (0..self.size)
            .find(|&i| self.down[i].count() == self.size)
            .expect("finite lattice has a top")
    }

    /// Number of true entries of the order relation.
    pub fn order_pairs(&self) -> usize {
        self.up.iter().map(BitRow::count).sum()
    }

    /// Elements strictly covering `x`.
    pub fn upper_covers(&self, x: usize) -> Vec<usize> {
        self.up[x]
            .iter()
            .filter(|&y| y != x)
            .filter(|&y| {
                self.up[x]
                    .and(&self.down[y])
                    .iter()
                    .all(|k| k == x || k == y)
            })
            .collect()
    }

    /// Elements strictly covered by `x`.
    pub fn lower_covers(&self, x: usize) -> Vec<usize> {
        self.down[x]
            .iter()
            .filter(|&y| y != x && self.upper_covers(y).contains(&x))
            .collect()
    }

    /// Hasse diagram edges `(lower, upper)` in index order.
    pub fn cover_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.size)
            .flat_map(|x| self.upper_covers(x).into_iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.upper_covers(self.bottom())
    }

    /// Length of the longest chain from the bottom to each element.
    pub fn ranks(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&i| self.down[i].count());
        let mut rank = vec![0usize; self.size];
        for &x in &order {
            for y in self.upper_covers(x) {
                rank[y] = rank[y].max(rank[x] + 1);
            }
        }
        rank
    }

    pub fn height(&self) -> usize {
        self.ranks()[self.top()]
    }

    /// `[a) = { x | x >= a }`, in index order.
    pub fn principal_filter(&self, a: usize) -> Vec<usize> {
        self.up[a].iter().collect()
    }

    /// `(a] = { x | x <= a }`, in index order.
    pub fn principal_ideal(&self, a: usize) -> Vec<usize> {
        self.down[a].iter().collect()
    }

    /// Elements `y` with `x ∨ y = top` and `x ∧ y = bottom`.
    pub fn complements(&self, x: usize) -> Vec<usize> {
        let (bot, top) = (self.bottom(), self.top());
        (0..self.size)
            .filter(|&y| self.join(x, y) == top && self.meet(x, y) == bot)
            .collect()
    }

    pub fn is_neutral(&self, x: usize) -> bool {
        self.pairs().all(|(y, z)| {
            let lhs = self.meet(self.meet(self.join(x, y), self.join(y, z)), self.join(z, x));
            let rhs = self.join(self.join(self.meet(x, y), self.meet(y, z)), self.meet(z, x));
            lhs == rhs
        })
    }

    pub fn is_distributive_element(&self, x: usize) -> bool {
        self.pairs()
            .all(|(y, z)| self.join(x, self.meet(y, z)) == self.meet(self.join(x, y), self.join(x, z)))
    }

    pub fn is_standard(&self, x: usize) -> bool {
        self.pairs()
            .all(|(y, z)| self.meet(self.join(x, y), z) == self.join(self.meet(x, z), self.meet(y, z)))
    }

    pub fn is_modular_element(&self, x: usize) -> bool {
        self.pairs()
            .filter(|&(y, z)| self.leq(y, z))
            .all(|(y, z)| self.meet(self.join(x, y), z) == self.join(self.meet(x, z), y))
    }

    pub fn is_cancellable(&self, x: usize) -> bool {
        self.cancellation_witness(x).is_none()
    }

    /// A pair `y != z` with equal joins and meets against `x`, if any.
    pub fn cancellation_witness(&self, x: usize) -> Option<(usize, usize)> {
        let mut seen = BTreeMap::new();
        for y in 0..self.size {
            let key = (self.join(x, y), self.meet(x, y));
            if let Some(&z) = seen.get(&key) {
                return Some((z, y));
            }
            seen.insert(key, y);
        }
        None
    }

    pub fn classify_element(&self, x: usize) -> ElementClassification {
        ElementClassification {
            element: x,
            neutral: self.is_neutral(x),
            distributive: self.is_distributive_element(x),
            standard: self.is_standard(x),
            modular: self.is_modular_element(x),
            cancellable: self.is_cancellable(x),
        }
    }

    pub fn classify_all(&self) -> Vec<ElementClassification> {
        (0..self.size).map(|x| self.classify_element(x)).collect()
    }

    pub fn is_distributive_lattice(&self) -> bool {
        (0..self.size).all(|x| self.is_distributive_element(x))
    }

    pub fn is_modular_lattice(&self) -> bool {
        (0..self.size).all(|x| self.is_modular_element(x))
    }

    /// Closure of `generators` under meet and join, sorted.
    pub fn generated_sublattice(&self, generators: &[usize]) -> Vec<usize> {
        let mut members = BitRow::new(self.size);
        let mut list: Vec<usize> = Vec::new();
        for &g in generators {
            if !members.get(g) {
                members.set(g);
                list.push(g);
            }
        }
        let mut i = 0;
        while i < list.len() {
            let a = list[i];
            let mut j = 0;
            while j <= i {
                let b = list[j];
                for c in [self.meet(a, b), self.join(a, b)] {
                    if !members.get(c) {
                        members.set(c);
                        list.push(c);
                    }
                }
                j += 1;
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    fn subset_is_distributive(&self, subset: &[usize]) -> bool {
        subset.iter().all(|&x| {
            subset.iter().all(|&y| {
                subset
                    .iter()
                    .all(|&z| self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z)))
            })
        })
    }

    /// Neutrality through the generated-sublattice characterization: every
    /// sublattice generated by `{x, y, z}` is distributive.
    pub fn is_neutral_by_sublattices(&self, x: usize) -> bool {
        self.pairs()
            .all(|(y, z)| self.subset_is_distributive(&self.generated_sublattice(&[x, y, z])))
    }

    /// Checks, for every neutral atom `a` and every `x`, that `x` is
    /// cancellable iff `x ∨ a` is cancellable iff the cancellation implication
    /// holds for all `y, z` in `[a)`.
    pub fn verify_neutral_atom_lemma(&self) -> NeutralAtomReport {
        let mut report = NeutralAtomReport::default();
        let cancellable: Vec<bool> = (0..self.size).map(|x| self.is_cancellable(x)).collect();
        for a in self.atoms() {
            if !self.is_neutral(a) {
                continue;
            }
            report.neutral_atoms.push(a);
            let filter = self.principal_filter(a);
            for x in 0..self.size {
                report.checked += 1;
                let on_filter = {
                    let mut seen = BTreeMap::new();
                    filter.iter().all(|&y| seen.insert((self.join(x, y), self.meet(x, y)), y).is_none())
                };
                let joined = cancellable[self.join(x, a)];
                if cancellable[x] != joined || cancellable[x] != on_filter {
                    report.violations.push(NeutralAtomViolation {
                        atom: a,
                        element: x,
                        cancellable: cancellable[x],
                        join_with_atom_cancellable: joined,
                        cancellable_on_filter: on_filter,
                    });
                }
            }
        }
        report
    }

    /// Componentwise product; element `(i, j)` has index `i * other.size() + j`.
    pub fn direct_product(&self, other: &FiniteLattice) -> FiniteLattice {
        let m = other.size;
        let labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => Some(
                (0..self.size)
                    .flat_map(|i| (0..m).map(move |j| (i, j)))
                    .map(|(i, j)| format!("({},{})", self.name(i), other.name(j)))
                    .collect(),
            ),
        };
        FiniteLattice::from_order(
            self.size * m,
            |a, b| self.leq(a / m, b / m) && other.leq(a % m, b % m),
            labels,
        )
        .expect("product of lattices is a lattice")
    }

    /// Adjoins a new greatest element with index `size()`.
    pub fn adjoin_top(&self, label: &str) -> FiniteLattice {
        let n = self.size;
        let labels = self.labels.as_ref().map(|l| {
            let mut l = l.clone();
            l.push(String::from(label));
            l
        });
        FiniteLattice::from_order(n + 1, |a, b| b == n || (a < n && self.leq(a, b)), labels)
            .expect("adjoining a top keeps a lattice")
    }

    /// An order isomorphism `self -> other` as an index map, if one exists.
    pub fn isomorphism_to(&self, other: &FiniteLattice) -> Option<Vec<usize>> {
        if self.size != other.size || self.order_pairs() != other.order_pairs() {
            return None;
        }
        let sig = |l: &FiniteLattice, i: usize| {
            (
                l.down[i].count(),
                l.up[i].count(),
                l.lower_covers(i).len(),
                l.upper_covers(i).len(),
            )
        };
        let sig_a: Vec<_> = (0..self.size).map(|i| sig(self, i)).collect();
        let sig_b: Vec<_> = (0..other.size).map(|i| sig(other, i)).collect();
        let mut ms_a = sig_a.clone();
        let mut ms_b = sig_b.clone();
        ms_a.sort_unstable();
        ms_b.sort_unstable();
        if ms_a != ms_b {
            return None;
        }

        let mut order: Vec<usize> = (0..self.size).collect();
        order.sort_by_key(|&i| (sig_a[i].0, i));
        let mut map = vec![usize::MAX; self.size];
        let mut used = vec![false; other.size];

        fn search(
            k: usize,
            order: &[usize],
            a: &FiniteLattice,
            b: &FiniteLattice,
            sig_a: &[(usize, usize, usize, usize)],
            sig_b: &[(usize, usize, usize, usize)],
            map: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if k == order.len() {
                return true;
            }
            let x = order[k];
            for y in 0..b.size {
                if used[y] || sig_a[x] != sig_b[y] {
                    continue;
                }
                let consistent = order[..k].iter().all(|&p| {
                    a.leq(p, x) == b.leq(map[p], y) && a.leq(x, p) == b.leq(y, map[p])
                });
                if !consistent {
                    continue;
                }
                map[x] = y;
                used[y] = true;
                if search(k + 1, order, a, b, sig_a, sig_b, map, used) {
                    return true;
                }
                used[y] = false;
            }
            map[x] = usize::MAX;
            false
        }

        if search(0, &order, self, other, &sig_a, &sig_b, &mut map, &mut used) {
            Some(map)
        } else {
            None
        }
    }

    pub fn is_isomorphic(&self, other: &FiniteLattice) -> bool {
        self.isomorphism_to(other).is_some()
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size;
        (0..n).flat_map(move |y| (0..n).map(move |z| (y, z)))
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Result<Self, LatticeError> {
        let covers: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_covers(n, &covers, None)
    }

    /// Boolean lattice of subsets of a `k`-set; element index is the bitmask.
    pub fn boolean(k: u32) -> Self {
        FiniteLattice::from_order(1 << k, |a, b| a & !b == 0, None).expect("boolean lattice")
    }
}

fn bound_table(rows: &[BitRow], which: MissingBound) -> Result<Vec<usize>, LatticeError> {
    let n = rows.len();
    let mut table = vec![0usize; n * n];
    for x in 0..n {
        for y in x..n {
            let common = rows[x].and(&rows[y]);
            // The bound is the common element whose own row contains every
            // other common element.
            let best = common
                .iter()
                .max_by_key(|&c| rows[c].count())
                .filter(|&c| common.is_subset(&rows[c]))
                .ok_or(LatticeError::NotALattice(x, y, which))?;
            table[x * n + y] = best;
            table[y * n + x] = best;
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn named(names: &[&str], covers: &[(&str, &str)]) -> Result<FiniteLattice, LatticeError> {
        FiniteLattice::from_named_covers(
            names.iter().map(|s| s.to_string()).collect(),
            &covers
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect::<Vec<_>>(),
        )
    }

    fn n5() -> FiniteLattice {
        named(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
        )
        .unwrap()
    }

    fn m3() -> FiniteLattice {
        named(
            &["0", "a", "b", "c", "1"],
            &[("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")],
        )
        .unwrap()
    }

    #[test]
    fn two_chain_has_three_order_pairs() {
        let c = FiniteLattice::from_covers(2, &[(0, 1)], None).unwrap();
        assert_eq!(c.order_pairs(), 3);
        assert_eq!(c.meet(0, 1), 0);
        assert_eq!(c.join(0, 1), 1);
    }

    #[test]
    fn pentagon_join_and_witness() {
        let l = n5();
        let (a, b, c) = (1, 2, 3);
        assert_eq!(l.join(a, b), 4);
        assert_eq!(l.meet(b, c), 0);
        let cls = l.classify_element(b);
        assert!(!cls.cancellable);
        let (y, z) = l.cancellation_witness(b).unwrap();
        assert_eq!(
            (y.min(z), y.max(z)),
            (a, c),
            "b ∨ a = b ∨ c = 1 and b ∧ a = b ∧ c = 0"
        );
        assert!(!l.is_distributive_lattice());
    }

    #[test]
    fn missing_upper_bound_is_rejected() {
        let err = named(&["0", "a", "b"], &[("0", "a"), ("0", "b")]).unwrap_err();
        assert_eq!(err, LatticeError::NotALattice(1, 2, MissingBound::Join));
    }

    #[test]
    fn cycle_is_rejected() {
        let err = FiniteLattice::from_covers(3, &[(0, 1), (1, 2), (2, 1)], None).unwrap_err();
        assert!(matches!(err, LatticeError::CycleDetected(_)));
    }

    #[test]
    fn empty_rejected_singleton_accepted() {
        assert_eq!(FiniteLattice::from_covers(0, &[], None).unwrap_err(), LatticeError::Empty);
        let one = FiniteLattice::from_covers(1, &[], None).unwrap();
        let c = one.classify_element(0);
        assert!(c.neutral && c.distributive && c.standard && c.modular && c.cancellable);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let err = named(&["0", "0"], &[]).unwrap_err();
        assert_eq!(err, LatticeError::DuplicateLabel("0".into()));
    }

    #[test]
    fn chain_elements_carry_every_flag() {
        let c = FiniteLattice::chain(5).unwrap();
        for cls in c.classify_all() {
            assert!(cls.neutral && cls.distributive && cls.standard && cls.modular && cls.cancellable);
        }
    }

    #[test]
    fn diamond_atoms_modular_not_cancellable() {
        let l = m3();
        let cls = l.classify_all();
        for c in &cls {
            assert!(c.modular);
            assert_eq!(c.cancellable, c.element == 0 || c.element == 4);
        }
    }

    #[test]
    fn filters_at_extremes() {
        let l = n5();
        assert_eq!(l.principal_filter(4), vec![4]);
        assert_eq!(l.principal_filter(0), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn product_of_chains_is_boolean_square() {
        let c2 = FiniteLattice::chain(2).unwrap();
        let sq = c2.direct_product(&c2);
        assert!(sq.is_isomorphic(&FiniteLattice::boolean(2)));
        assert!(!sq.is_isomorphic(&FiniteLattice::chain(4).unwrap()));
        assert!(!n5().is_isomorphic(&m3()));
    }

    #[test]
    fn adjoin_top_adds_greatest_element() {
        let l = n5().adjoin_top("top");
        assert_eq!(l.size(), 6);
        assert_eq!(l.top(), 5);
        assert_eq!(l.upper_covers(4), vec![5]);
        assert_eq!(l.label(5), Some("top"));
    }

    #[test]
    fn neutral_atom_lemma_on_cube_and_pentagon() {
        let cube = FiniteLattice::boolean(3);
        let r = cube.verify_neutral_atom_lemma();
        assert_eq!(r.neutral_atoms.len(), 3);
        assert!(r.holds());

        let pent = n5();
        let r = pent.verify_neutral_atom_lemma();
        assert!(r.neutral_atoms.is_empty());
        assert!(r.holds());

        let r = FiniteLattice::chain(2).unwrap().verify_neutral_atom_lemma();
        assert!(r.holds());
    }

    #[test]
    fn neutrality_routes_agree_on_fixtures() {
        for l in [n5(), m3(), FiniteLattice::boolean(3), FiniteLattice::chain(4).unwrap()] {
            for x in 0..l.size() {
                assert_eq!(l.is_neutral(x), l.is_neutral_by_sublattices(x));
            }
        }
    }

    #[test]
    fn hasse_and_ranks() {
        let l = n5();
        assert_eq!(l.cover_pairs(), vec![(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)]);
        assert_eq!(l.ranks(), vec![0, 1, 1, 2, 3]);
        assert_eq!(l.height(), 3);
        assert_eq!(l.complements(2), vec![1, 3]);
    }
}
