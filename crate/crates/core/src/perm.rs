//! Permutations of `{1..n}` and subgroups of `S_n`.
//!
//! Composition acts left to right: `p.then(&q)` sends `i` to `(i p) q`,
//! matching the exponent notation `iπ` used for permutational identities.
//! Internally points are stored 0-based; everything user-facing (cycle
//! notation, JSON images) is 1-based.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::lattice::FiniteLattice;

/// Largest degree for which the full subgroup lattice is enumerated.
pub const MAX_ENUMERATION_DEGREE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("degree {0} is above the enumeration limit of 5")]
    DegreeTooLarge(usize),
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error("image list is not a bijection on 1..={0}")]
    NotABijection(usize),
    #[error("malformed cycle notation at byte {0}")]
    CycleSyntax(usize),
    #[error("point {0} is outside 1..={1}")]
    PointOutOfRange(usize, usize),
    #[error("member set is not closed under composition")]
    NotASubgroup,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u8).collect(),
        }
    }

    /// From 1-based images: `images[i-1] = iπ`.
    pub fn from_images(images: &[usize]) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut image = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotABijection(n));
            }
            seen[v - 1] = true;
            image.push((v - 1) as u8);
        }
        Ok(Permutation { image })
    }

    /// From 0-based images.
    pub(crate) fn from_zero_based(image: Vec<u8>) -> Self {
        Permutation { image }
    }

    /// Product of cycles on `1..=n`, each cycle given by its 1-based points.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut p = Permutation::identity(n);
        for cycle in cycles {
            for &point in cycle.iter() {
                if point == 0 || point > n {
                    return Err(PermError::PointOutOfRange(point, n));
                }
            }
            let mut c: Vec<u8> = (0..n as u8).collect();
            for k in 0..cycle.len() {
                c[cycle[k] - 1] = (cycle[(k + 1) % cycle.len()] - 1) as u8;
            }
            let c = Permutation::from_images(&c.iter().map(|&v| v as usize + 1).collect::<Vec<_>>())?;
            p = p.then(&c)?;
        }
        Ok(p)
    }

    /// Parses cycle notation such as `(123)(45)`, `(1,2,3)` or `()`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self, PermError> {
        let bytes = text.as_bytes();
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
                *i += 1;
            }
        };
        skip_ws(&mut i);
        if text.trim() == "e" {
            return Ok(Permutation::identity(n));
        }
        while i < bytes.len() {
            if bytes[i] != b'(' {
                return Err(PermError::CycleSyntax(i));
            }
            i += 1;
            let mut cycle = Vec::new();
            let comma_separated = text[i..].split(')').next().is_some_and(|s| s.contains(','));
            loop {
                skip_ws(&mut i);
                if i >= bytes.len() {
                    return Err(PermError::CycleSyntax(i));
                }
                match bytes[i] {
                    b')' => {
                        i += 1;
                        break;
                    }
                    b',' => i += 1,
                    b'0'..=b'9' => {
                        let start = i;
                        if comma_separated {
                            while i < bytes.len() && bytes[i].is_ascii_digit() {
                                i += 1;
                            }
                        } else {
                            i += 1;
                        }
                        let v: usize = text[start..i].parse().map_err(|_| PermError::CycleSyntax(start))?;
                        if cycle.contains(&v) {
                            return Err(PermError::CycleSyntax(start));
                        }
                        cycle.push(v);
                    }
                    _ => return Err(PermError::CycleSyntax(i)),
                }
            }
            cycles.push(cycle);
            skip_ws(&mut i);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(n, &refs)
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self, PermError> {
        Permutation::from_cycles(n, &[&[i, j]])
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// `iπ` for a 1-based point `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] as usize + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Apply `self`, then `other`.
    pub fn then(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            image: self.image.iter().map(|&v| other.image[v as usize]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0u8; self.degree()];
        for (i, &v) in self.image.iter().enumerate() {
            image[v as usize] = i as u8;
        }
        Permutation { image }
    }

    pub fn is_even(&self) -> bool {
        let moved: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        moved % 2 == 0
    }

    /// Non-trivial cycles, each starting at its smallest point (1-based).
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.image[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i + 1);
                i = self.image[i] as usize;
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.cycles().iter().fold(1, |acc, c| lcm(acc, c.len()))
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        let wide = self.degree() > 9;
        for c in cycles {
            f.write_str("(")?;
            for (k, p) in c.iter().enumerate() {
                if wide && k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A subgroup of `S_n` as its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    n: usize,
    members: Vec<Permutation>,
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: by degree, then order, then member list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        (self.n, self.order(), &self.members).cmp(&(other.n, other.order(), &other.members))
    }
}

impl Subgroup {
    pub fn trivial(n: usize) -> Self {
        Subgroup {
            n,
            members: vec![Permutation::identity(n)],
        }
    }

    /// Smallest subgroup containing `generators`.
    pub fn generated(n: usize, generators: &[Permutation]) -> Result<Self, PermError> {
        for g in generators {
            if g.degree() != n {
                return Err(PermError::DegreeMismatch(n, g.degree()));
            }
        }
        let mut members = BTreeSet::new();
        members.insert(Permutation::identity(n));
        let mut queue = vec![Permutation::identity(n)];
        while let Some(p) = queue.pop() {
            for g in generators {
                let q = p.then(g)?;
                if members.insert(q.clone()) {
                    queue.push(q);
                }
            }
        }
        Ok(Subgroup {
            n,
            members: members.into_iter().collect(),
        })
    }

    /// Validates that `members` is a subgroup of `S_n`.
    pub fn from_members(n: usize, members: Vec<Permutation>) -> Result<Self, PermError> {
        let set: BTreeSet<Permutation> = members.into_iter().collect();
        for p in &set {
            if p.degree() != n {
                return Err(PermError::DegreeMismatch(n, p.degree()));
            }
        }
        if !set.contains(&Permutation::identity(n)) {
            return Err(PermError::NotASubgroup);
        }
        for a in &set {
            if !set.contains(&a.inverse()) {
                return Err(PermError::NotASubgroup);
            }
            for b in &set {
                if !set.contains(&a.then(b)?) {
                    return Err(PermError::NotASubgroup);
                }
            }
        }
        Ok(Subgroup {
            n,
            members: set.into_iter().collect(),
        })
    }

    pub fn symmetric(n: usize) -> Self {
        let members = all_permutations(n);
        Subgroup { n, members }
    }

    pub fn alternating(n: usize) -> Self {
        let members = all_permutations(n).into_iter().filter(Permutation::is_even).collect();
        Subgroup { n, members }
    }

    /// `Stab_n(i)`: permutations fixing the 1-based point `i`.
    pub fn stabilizer(n: usize, i: usize) -> Result<Self, PermError> {
        if i == 0 || i > n {
            return Err(PermError::PointOutOfRange(i, n));
        }
        let members = all_permutations(n).into_iter().filter(|p| p.apply(i) == i).collect();
        Ok(Subgroup { n, members })
    }

    /// The normal Klein four-group of `S_4`.
    pub fn klein_four() -> Self {
        let gens = [
            Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).expect("valid"),
            Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).expect("valid"),
        ];
        Subgroup::generated(4, &gens).expect("valid")
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Permutation] {
        &self.members
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.members.binary_search(p).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.n == other.n && self.members.iter().all(|p| other.contains(p))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn meet(&self, other: &Subgroup) -> Result<Subgroup, PermError> {
        if self.n != other.n {
            return Err(PermError::DegreeMismatch(self.n, other.n));
        }
        Ok(Subgroup {
            n: self.n,
            members: self.members.iter().filter(|p| other.contains(p)).cloned().collect(),
        })
    }

    pub fn join(&self, other: &Subgroup) -> Result<Subgroup, PermError> {
        if self.n != other.n {
            return Err(PermError::DegreeMismatch(self.n, other.n));
        }
        let gens: Vec<Permutation> = self.members.iter().chain(&other.members).cloned().collect();
        Subgroup::generated(self.n, &gens)
    }

    /// Name following the `T`, `T_ij`, `C_ijk`, `P_ij,kl`, `V_4`, `A_n`,
    /// `Stab_n(i)`, `S_n` scheme, when the subgroup is one of those.
    pub fn conventional_name(&self) -> Option<String> {
        let n = self.n;
        let order = self.order();
        if order == 1 {
            return Some(String::from("T"));
        }
        if order == factorial(n) {
            return Some(format!("S_{n}"));
        }
        let nontrivial: Vec<&Permutation> = self.members.iter().filter(|p| !p.is_identity()).collect();
        if order == 2 {
            let cycles = nontrivial[0].cycles();
            if cycles.len() == 1 && cycles[0].len() == 2 {
                return Some(format!("T_{}{}", cycles[0][0], cycles[0][1]));
            }
        }
        // Cyclic group generated by a single cycle of length >= 3.
        let cycle_gens: Vec<Vec<usize>> = nontrivial
            .iter()
            .filter(|p| p.order() == order)
            .map(|p| p.cycles())
            .filter(|c| c.len() == 1 && c[0].len() >= 3)
            .map(|mut c| c.remove(0))
            .collect();
        if let Some(best) = cycle_gens.iter().min() {
            let digits: String = best.iter().map(|p| format!("{p}")).collect();
            return Some(format!("C_{digits}"));
        }
        if order == 4 {
            let transpositions: Vec<Vec<usize>> = nontrivial
                .iter()
                .map(|p| p.cycles())
                .filter(|c| c.len() == 1 && c[0].len() == 2)
                .map(|mut c| c.remove(0))
                .collect();
            if transpositions.len() == 2 {
                let (a, b) = (&transpositions[0], &transpositions[1]);
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                return Some(format!("P_{}{},{}{}", a[0], a[1], b[0], b[1]));
            }
            if n == 4 && *self == Subgroup::klein_four() {
                return Some(String::from("V_4"));
            }
        }
        if n >= 3 && *self == Subgroup::alternating(n) {
            return Some(format!("A_{n}"));
        }
        if n >= 3 && order == factorial(n - 1) {
            for i in 1..=n {
                if self.members.iter().all(|p| p.apply(i) == i) {
                    return Some(format!("Stab_{n}({i})"));
                }
            }
        }
        None
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.conventional_name() {
            Some(name) => f.write_str(&name),
            None => {
                f.write_str("<")?;
                for (k, p) in self.members.iter().filter(|p| !p.is_identity()).enumerate() {
                    if k > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(">")
            }
        }
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// All of `S_n` in lexicographic order of image lists.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut out = Vec::with_capacity(factorial(n));
    let mut current: Vec<u8> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, current: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
        if current.len() == n {
            out.push(Permutation::from_zero_based(current.clone()));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                current.push(v as u8);
                rec(n, current, used, out);
                current.pop();
                used[v] = false;
            }
        }
    }
    rec(n, &mut current, &mut used, &mut out);
    out
}

/// `S_n` for `n <= 5` as an indexed multiplication table; subgroups are
/// bit masks over the lexicographically ordered elements.
struct SymmetricTable {
    elements: Vec<Permutation>,
    product: Vec<u8>,
}

impl SymmetricTable {
    fn new(n: usize) -> Self {
        let elements = all_permutations(n);
        let index: BTreeMap<&Permutation, u8> =
            elements.iter().enumerate().map(|(i, p)| (p, i as u8)).collect();
        let k = elements.len();
        let mut product = vec![0u8; k * k];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                product[a * k + b] = index[&pa.then(pb).expect("same degree")];
            }
        }
        SymmetricTable { elements, product }
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.product[a * self.elements.len() + b] as usize
    }

    fn closure(&self, generators: &[usize]) -> u128 {
        // Index 0 is the identity (lexicographically smallest image list).
        let mut mask: u128 = 1;
        let mut list = vec![0usize];
        let mut i = 0;
        while i < list.len() {
            let p = list[i];
            for &g in generators {
                let q = self.mul(p, g);
                if mask >> q & 1 == 0 {
                    mask |= 1 << q;
                    list.push(q);
                }
            }
            i += 1;
        }
        mask
    }

    fn to_subgroup(&self, n: usize, mask: u128) -> Subgroup {
        let members = (0..self.elements.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| self.elements[i].clone())
            .collect();
        Subgroup { n, members }
    }
}

/// Every subgroup of `S_n` exactly once, sorted canonically (by order,
/// then member list).
pub fn all_subgroups(n: usize) -> Result<Vec<Subgroup>, PermError> {
    if n == 0 {
        return Err(PermError::ZeroDegree);
    }
    if n > MAX_ENUMERATION_DEGREE {
        return Err(PermError::DegreeTooLarge(n));
    }
    let table = SymmetricTable::new(n);
    let k = table.elements.len();

    let mut cyclic: BTreeMap<u128, usize> = BTreeMap::new();
    for g in 0..k {
        cyclic.entry(table.closure(&[g])).or_insert(g);
    }

    let mut found: BTreeMap<u128, Vec<usize>> = BTreeMap::new();
    found.insert(1, Vec::new());
    let mut queue: Vec<u128> = vec![1];
    while let Some(h) = queue.pop() {
        let gens = found[&h].clone();
        for (&c, &g) in &cyclic {
            if c & !h == 0 {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(g);
            let joined = table.closure(&next_gens);
            if let alloc::collections::btree_map::Entry::Vacant(e) = found.entry(joined) {
                e.insert(next_gens);
                queue.push(joined);
            }
        }
    }

    let mut subgroups: Vec<Subgroup> = found.keys().map(|&m| table.to_subgroup(n, m)).collect();
    subgroups.sort();
    Ok(subgroups)
}

/// `Sub(S_n)` ordered by inclusion, with conventional labels where they
/// apply and `G<order>_<index>` otherwise.
pub fn subgroup_lattice(n: usize) -> Result<(FiniteLattice, Vec<Subgroup>), PermError> {
    let subgroups = all_subgroups(n)?;
    let labels: Vec<String> = subgroups
        .iter()
        .enumerate()
        .map(|(i, g)| g.conventional_name().unwrap_or_else(|| format!("G{}_{}", g.order(), i)))
        .collect();
    let lattice = FiniteLattice::from_order(
        subgroups.len(),
        |a, b| subgroups[a].is_subgroup_of(&subgroups[b]),
        Some(labels),
    )
    .expect("subgroups under inclusion form a lattice");
    Ok((lattice, subgroups))
}
