//! Words of the free unary semigroup and identities between them.
//!
//! A [`Word`] is a nonempty flat sequence of items; an item is a letter or
//! the pseudoinverse `~( ... )` of a nested word. Words without any bar are
//! semigroup words, and only those take part in the pattern-containment
//! order `u <= v` (`v = a ξ(u) b` for an endomorphism `ξ` and possibly empty
//! contexts `a`, `b`).
//!
//! Text syntax: letters are identifiers `[A-Za-z][A-Za-z0-9]*` separated by
//! whitespace, `~( w )` is the pseudoinverse of `w`, `x^3` expands to
//! `x x x`, and plain parentheses group (so `(x y)^2` is `x y x y`).
//! Identities are written `u = v` or `w = 0`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::perm::Permutation;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum WordError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("substitution is undefined on letter {0}")]
    UndefinedLetter(Letter),
    #[error("the containment order is defined on semigroup words only")]
    UnsupportedUnary,
    #[error("permutation of degree {got} cannot rename a word with {expected} letters")]
    RenameDegree { expected: usize, got: usize },
}

fn syntax(position: usize, message: &str) -> WordError {
    WordError::Syntax {
        position,
        message: message.to_string(),
    }
}

/// A letter name. Letters order by alphabetic stem, then numeric suffix, so
/// `x2 < x10` and indexed letters `x1, x2, ...` sort by index.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Letter(String);

impl Letter {
    pub fn new(name: &str) -> Result<Self, WordError> {
        let mut chars = name.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() => {}
            _ => return Err(syntax(0, "letters start with an ASCII letter")),
        }
        if !chars.all(|c| c.is_ascii_alphanumeric()) {
            return Err(syntax(0, "letters are alphanumeric"));
        }
        Ok(Letter(name.to_string()))
    }

    /// `x1`, `x2`, ...
    pub fn indexed(i: usize) -> Self {
        Letter(format!("x{i}"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn sort_key(&self) -> (&str, Option<u64>, usize) {
        let stem_len = self.0.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        let (stem, digits) = self.0.split_at(stem_len);
        (stem, digits.parse().ok(), digits.len())
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Item {
    Letter(Letter),
    Bar(Word),
}

/// Nonempty element of the free unary semigroup.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    items: Vec<Item>,
}

/// `ℓ(w)`: letter count for semigroup words, infinite otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum WordLength {
    Finite(usize),
    Infinite,
}

impl Word {
    /// Builds a word from items, flattening nothing (items are already flat).
    /// Returns `None` for an empty item list.
    pub fn from_items(items: Vec<Item>) -> Option<Self> {
        if items.is_empty() {
            None
        } else {
            Some(Word { items })
        }
    }

    pub fn letter(l: Letter) -> Self {
        Word {
            items: vec![Item::Letter(l)],
        }
    }

    /// Semigroup word from a nonempty letter sequence.
    pub fn from_letters(letters: Vec<Letter>) -> Option<Self> {
        Word::from_items(letters.into_iter().map(Item::Letter).collect())
    }

    /// Pseudoinverse `~(w)`.
    pub fn bar(w: Word) -> Self {
        Word {
            items: vec![Item::Bar(w)],
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut items = self.items.clone();
        items.extend(other.items.iter().cloned());
        Word { items }
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn parse(text: &str) -> Result<Word, WordError> {
        let mut p = Parser { text, pos: 0 };
        let items = p.sequence(0)?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(syntax(p.pos, "unexpected input"));
        }
        Word::from_items(items).ok_or_else(|| syntax(0, "empty word"))
    }

    /// Canonical text: single spaces between tokens, no exponent sugar.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_items(&self.items, &mut out);
        out
    }

    pub fn is_semigroup_word(&self) -> bool {
        self.items.iter().all(|i| matches!(i, Item::Letter(_)))
    }

    /// The letter sequence of a semigroup word.
    pub fn letters(&self) -> Option<Vec<&Letter>> {
        self.items
            .iter()
            .map(|i| match i {
                Item::Letter(l) => Some(l),
                Item::Bar(_) => None,
            })
            .collect()
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        let mut out = BTreeSet::new();
        self.collect_content(&mut out);
        out
    }

    fn collect_content(&self, out: &mut BTreeSet<Letter>) {
        for item in &self.items {
            match item {
                Item::Letter(l) => {
                    out.insert(l.clone());
                }
                Item::Bar(w) => w.collect_content(out),
            }
        }
    }

    pub fn length(&self) -> WordLength {
        if self.is_semigroup_word() {
            WordLength::Finite(self.items.len())
        } else {
            WordLength::Infinite
        }
    }

    /// Occurrences of `letter`, counted at every depth.
    pub fn occurrences(&self, letter: &Letter) -> usize {
        self.items
            .iter()
            .map(|i| match i {
                Item::Letter(l) => usize::from(l == letter),
                Item::Bar(w) => w.occurrences(letter),
            })
            .sum()
    }

    /// Occurrence count of every letter, at every depth.
    pub fn occurrence_counts(&self) -> BTreeMap<Letter, usize> {
        let mut out = BTreeMap::new();
        self.count_into(&mut out);
        out
    }

    fn count_into(&self, out: &mut BTreeMap<Letter, usize>) {
        for item in &self.items {
            match item {
                Item::Letter(l) => *out.entry(l.clone()).or_insert(0) += 1,
                Item::Bar(w) => w.count_into(out),
            }
        }
    }

    /// Semigroup word in which every letter occurs at most once.
    pub fn is_linear(&self) -> bool {
        match self.letters() {
            Some(ls) => {
                let set: BTreeSet<&Letter> = ls.iter().copied().collect();
                set.len() == ls.len()
            }
            None => false,
        }
    }

    /// `x^2` for some letter `x`.
    pub fn is_square_of_letter(&self) -> bool {
        matches!(self.letters().as_deref(), Some([a, b]) if a == b)
    }

    pub fn has_bar(&self) -> bool {
        !self.is_semigroup_word()
    }

    /// First-occurrence pattern: letters replaced by the index of their
    /// first appearance. Two semigroup words are equivalent iff their
    /// patterns coincide.
    pub fn pattern(&self) -> Option<Vec<usize>> {
        let letters = self.letters()?;
        let mut seen: Vec<&Letter> = Vec::new();
        Some(
            letters
                .into_iter()
                .map(|l| match seen.iter().position(|s| *s == l) {
                    Some(k) => k,
                    None => {
                        seen.push(l);
                        seen.len() - 1
                    }
                })
                .collect(),
        )
    }

    pub fn substitute(&self, sigma: &Substitution) -> Result<Word, WordError> {
        let mut items = Vec::new();
        for item in &self.items {
            match item {
                Item::Letter(l) => {
                    let image = sigma.get(l).ok_or_else(|| WordError::UndefinedLetter(l.clone()))?;
                    items.extend(image.items.iter().cloned());
                }
                Item::Bar(w) => items.push(Item::Bar(w.substitute(sigma)?)),
            }
        }
        Ok(Word { items })
    }

    /// `ξ[w]`: with `con(w) = {l_1 < ... < l_k}` in letter order, replaces
    /// `l_i` by `l_{iπ}`.
    pub fn rename(&self, pi: &Permutation) -> Result<Word, WordError> {
        let letters: Vec<Letter> = self.content().into_iter().collect();
        if pi.degree() != letters.len() {
            return Err(WordError::RenameDegree {
                expected: letters.len(),
                got: pi.degree(),
            });
        }
        let sigma = Substitution::from_pairs(
            letters
                .iter()
                .enumerate()
                .map(|(i, l)| (l.clone(), Word::letter(letters[pi.apply(i + 1) - 1].clone()))),
        );
        self.substitute(&sigma)
    }

    fn semigroup_letters(&self) -> Result<Vec<&Letter>, WordError> {
        self.letters().ok_or(WordError::UnsupportedUnary)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({})", self.render())
    }
}

fn render_items(items: &[Item], out: &mut String) {
    for (k, item) in items.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        match item {
            Item::Letter(l) => out.push_str(l.as_str()),
            Item::Bar(w) => {
                out.push_str("~(");
                render_items(&w.items, out);
                out.push(')');
            }
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.text.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn sequence(&mut self, depth: usize) -> Result<Vec<Item>, WordError> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b')') if depth > 0 => break,
                Some(b')') => return Err(syntax(self.pos, "unbalanced ')'")),
                Some(b'~') => {
                    self.pos += 1;
                    self.skip_ws();
                    if self.peek() != Some(b'(') {
                        return Err(syntax(self.pos, "expected '(' after '~'"));
                    }
                    let inner = self.group(depth)?;
                    let bar = vec![Item::Bar(inner)];
                    let times = self.exponent()?;
                    for _ in 0..times {
                        items.extend(bar.iter().cloned());
                    }
                }
                Some(b'(') => {
                    let inner = self.group(depth)?;
                    let times = self.exponent()?;
                    for _ in 0..times {
                        items.extend(inner.items.iter().cloned());
                    }
                }
                Some(b) if b.is_ascii_alphabetic() => {
                    let start = self.pos;
                    while self.peek().is_some_and(|b| b.is_ascii_alphanumeric()) {
                        self.pos += 1;
                    }
                    let letter = Letter(self.text[start..self.pos].to_string());
                    let times = self.exponent()?;
                    for _ in 0..times {
                        items.push(Item::Letter(letter.clone()));
                    }
                }
                Some(_) => return Err(syntax(self.pos, "unexpected character")),
            }
        }
        Ok(items)
    }

    fn group(&mut self, depth: usize) -> Result<Word, WordError> {
        let open = self.pos;
        self.pos += 1;
        let items = self.sequence(depth + 1)?;
        self.skip_ws();
        if self.peek() != Some(b')') {
            return Err(syntax(self.pos, "missing ')'"));
        }
        self.pos += 1;
        Word::from_items(items).ok_or_else(|| syntax(open, "empty group"))
    }

    fn exponent(&mut self) -> Result<usize, WordError> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        match self.text[start..self.pos].parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k),
            _ => Err(syntax(start, "exponent must be a positive integer")),
        }
    }
}

/// Letter-to-word map.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<Letter, Word>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Letter, Word)>) -> Self {
        Substitution {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn insert(&mut self, letter: Letter, image: Word) {
        self.map.insert(letter, image);
    }

    pub fn get(&self, letter: &Letter) -> Option<&Word> {
        self.map.get(letter)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Letter, &Word)> {
        self.map.iter()
    }

    /// `x ↦ τ(σ(x))`, so that `w.substitute(σ.then(τ)) == w.substitute(σ).substitute(τ)`.
    pub fn then(&self, tau: &Substitution) -> Result<Substitution, WordError> {
        let map = self
            .map
            .iter()
            .map(|(l, w)| Ok((l.clone(), w.substitute(tau)?)))
            .collect::<Result<_, WordError>>()?;
        Ok(Substitution { map })
    }

    /// Letter-to-letter and injective.
    pub fn is_renaming(&self) -> bool {
        let mut targets = BTreeSet::new();
        self.map
            .values()
            .all(|w| matches!(w.items.as_slice(), [Item::Letter(l)] if targets.insert(l.clone())))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    Pair(Word, Word),
    /// `w ≈ 0`, short for `w x ≈ x w ≈ w` with `x` fresh.
    Zero(Word),
}

impl Identity {
    pub fn parse(text: &str) -> Result<Identity, WordError> {
        let mut parts = text.splitn(2, '=');
        let lhs = parts.next().unwrap_or("");
        let rhs = parts
            .next()
            .ok_or_else(|| syntax(text.len(), "expected '='"))?;
        if rhs.contains('=') {
            return Err(syntax(lhs.len() + 1 + rhs.find('=').unwrap_or(0), "more than one '='"));
        }
        let offset = lhs.len() + 1;
        let left = Word::parse(lhs)?;
        if rhs.trim() == "0" {
            return Ok(Identity::Zero(left));
        }
        let right = Word::parse(rhs).map_err(|e| match e {
            WordError::Syntax { position, message } => WordError::Syntax {
                position: position + offset,
                message,
            },
            other => other,
        })?;
        Ok(Identity::Pair(left, right))
    }

    pub fn render(&self) -> String {
        match self {
            Identity::Pair(u, v) => format!("{} = {}", u.render(), v.render()),
            Identity::Zero(w) => format!("{} = 0", w.render()),
        }
    }

    pub fn content(&self) -> BTreeSet<Letter> {
        match self {
            Identity::Pair(u, v) => {
                let mut c = u.content();
                c.extend(v.content());
                c
            }
            Identity::Zero(w) => w.content(),
        }
    }

    /// `p_m[π]`: `x1 ... xm ≈ x_{1π} ... x_{mπ}`.
    pub fn permutational(pi: &Permutation) -> Identity {
        let m = pi.degree();
        let lhs = (1..=m).map(Letter::indexed).collect();
        let rhs = (1..=m).map(|i| Letter::indexed(pi.apply(i))).collect();
        Identity::Pair(
            Word::from_letters(lhs).expect("degree >= 1"),
            Word::from_letters(rhs).expect("degree >= 1"),
        )
    }

    pub fn predicates(&self) -> IdentityPredicates {
        match self {
            Identity::Zero(_) => IdentityPredicates {
                permutational: None,
                substitutive: false,
                balanced: false,
                zero_reduced: true,
            },
            Identity::Pair(u, v) => IdentityPredicates {
                permutational: permutation_between(u, v).filter(|p| !p.is_identity()),
                substitutive: is_substitutive(u, v),
                balanced: u.occurrence_counts() == v.occurrence_counts(),
                zero_reduced: false,
            },
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityPredicates {
    pub permutational: Option<Permutation>,
    pub substitutive: bool,
    pub balanced: bool,
    pub zero_reduced: bool,
}

/// For linear `u`, `v` of equal length and content: the `π` with
/// `v[i] = u[iπ]` (1-based positions), so that `u ≈ v` is an instance of
/// `p_m[π]`. Includes the identity permutation.
pub fn permutation_between(u: &Word, v: &Word) -> Option<Permutation> {
    if !u.is_linear() || !v.is_linear() {
        return None;
    }
    let (lu, lv) = (u.letters()?, v.letters()?);
    if lu.len() != lv.len() {
        return None;
    }
    let images = lv
        .iter()
        .map(|l| lu.iter().position(|x| x == l).map(|p| p + 1))
        .collect::<Option<Vec<usize>>>()?;
    Permutation::from_images(&images).ok()
}

/// For linear `u`, `v` with equal content: the `ξ` with `v = ξ[u]`, where
/// `ξ[·]` renames the `i`-th letter of the content (in letter order) to the
/// `iξ`-th.
pub fn renaming_between(u: &Word, v: &Word) -> Option<Permutation> {
    if !u.is_linear() || !v.is_linear() || u.content() != v.content() {
        return None;
    }
    let content: Vec<Letter> = u.content().into_iter().collect();
    let rank = |l: &Letter| content.iter().position(|c| c == l).expect("same content") + 1;
    let (lu, lv) = (u.letters()?, v.letters()?);
    let mut images = vec![0; content.len()];
    for (a, b) in lu.iter().zip(&lv) {
        images[rank(a) - 1] = rank(b);
    }
    Permutation::from_images(&images).ok()
}

fn is_substitutive(u: &Word, v: &Word) -> bool {
    if !u.is_semigroup_word() || !v.is_semigroup_word() || u.content() != v.content() {
        return false;
    }
    u.pattern() == v.pattern()
}

/// Witness for `u <= v`: `v = left · ξ(u) · right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternWitness {
    pub substitution: Substitution,
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
}

/// Searches for `ξ`, `a`, `b` with `v = a ξ(u) b`. Contexts are tried left
/// to right and letter images shortest first; the first witness found is
/// returned.
pub fn pattern_leq(u: &Word, v: &Word) -> Result<Option<PatternWitness>, WordError> {
    let lu = u.semigroup_letters()?;
    let lv = v.semigroup_letters()?;
    Ok(embed(&lu, &lv))
}

fn embed(u: &[&Letter], v: &[&Letter]) -> Option<PatternWitness> {
    if u.len() > v.len() {
        return None;
    }
    // Letters of u in first-occurrence order, and u as indices into them.
    let mut distinct: Vec<&Letter> = Vec::new();
    let pattern: Vec<usize> = u
        .iter()
        .map(|l| match distinct.iter().position(|d| d == l) {
            Some(k) => k,
            None => {
                distinct.push(l);
                distinct.len() - 1
            }
        })
        .collect();
    let mut images: Vec<Option<(usize, usize)>> = vec![None; distinct.len()];

    fn go(
        k: usize,
        pos: usize,
        pattern: &[usize],
        v: &[&Letter],
        images: &mut [Option<(usize, usize)>],
    ) -> Option<usize> {
        if k == pattern.len() {
            return Some(pos);
        }
        let var = pattern[k];
        if let Some((start, len)) = images[var] {
            if pos + len <= v.len() && v[pos..pos + len] == v[start..start + len] {
                return go(k + 1, pos + len, pattern, v, images);
            }
            return None;
        }
        let remaining = pattern.len() - k - 1;
        let max_len = v.len().saturating_sub(pos + remaining);
        for len in 1..=max_len {
            images[var] = Some((pos, len));
            if let Some(end) = go(k + 1, pos + len, pattern, v, images) {
                return Some(end);
            }
        }
        images[var] = None;
        None
    }

    for start in 0..=v.len() - u.len() {
        images.iter_mut().for_each(|s| *s = None);
        if let Some(end) = go(0, start, &pattern, v, &mut images) {
            let substitution = Substitution::from_pairs(distinct.iter().zip(&images).map(|(l, img)| {
                let (s, len) = img.expect("every letter of u is bound");
                let w = Word::from_letters(v[s..s + len].iter().map(|&x| x.clone()).collect())
                    .expect("nonempty image");
                ((*l).clone(), w)
            }));
            return Some(PatternWitness {
                substitution,
                left: v[..start].iter().map(|&x| x.clone()).collect(),
                right: v[end..].iter().map(|&x| x.clone()).collect(),
            });
        }
    }
    None
}

pub fn leq(u: &Word, v: &Word) -> Result<bool, WordError> {
    Ok(pattern_leq(u, v)?.is_some())
}

/// `u < v`: `u <= v` and `u != v`.
pub fn strictly_less(u: &Word, v: &Word) -> Result<bool, WordError> {
    Ok(u != v && leq(u, v)?)
}

/// Neither `u <= v` nor `v <= u`.
pub fn incomparable(u: &Word, v: &Word) -> Result<bool, WordError> {
    Ok(!leq(u, v)? && !leq(v, u)?)
}

/// `v = φ(u)` for a letter bijection `φ`.
pub fn equivalent(u: &Word, v: &Word) -> Result<bool, WordError> {
    let pu = u.pattern().ok_or(WordError::UnsupportedUnary)?;
    let pv = v.pattern().ok_or(WordError::UnsupportedUnary)?;
    Ok(pu == pv)
}

/// Every semigroup word over `letters` with length in `1..=max_len`, by
/// length and then lexicographically.
pub fn words_up_to(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for l in letters {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned().filter_map(Word::from_letters));
        layer = next;
    }
    out
}

/// Semigroup words up to renaming: first-occurrence patterns of length
/// `1..=max_len` using at most `max_letters` letters, spelled in `x1, x2, ...`.
pub fn patterns_up_to(max_len: usize, max_letters: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0)];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (w, used) in &layer {
            for k in 0..=(*used).min(max_letters.saturating_sub(1)) {
                if k == *used && *used >= max_letters {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(k);
                next.push((w2, (*used).max(k + 1)));
            }
        }
        out.extend(
            next.iter()
                .filter_map(|(w, _)| Word::from_letters(w.iter().map(|&k| Letter::indexed(k + 1)).collect())),
        );
        layer = next;
    }
    out
}
