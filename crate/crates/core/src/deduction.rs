//! Bounded equational deduction over semigroup words.
//!
//! A deduction step replaces a factor `σ(l)` of a word by `σ(r)` for a basis
//! identity `l ≈ r` used in either orientation. Zero identities `w ≈ 0` are
//! applied natively by default: a word with a factor matching an instance of
//! `w` steps to the absorbing [`Term::Zero`], and a goal `u ≈ v` is proved
//! once both sides reach it. [`DeriveOptions::literal_zero`] switches to the
//! literal system `w z ≈ w`, `z w ≈ w` with `z` fresh.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::perm::Permutation;
use crate::words::{
    pattern_leq, renaming_between, Identity, Letter, PatternWitness, Substitution, Word,
    WordError, WordLength,
};

pub const DEFAULT_DEPTH: usize = 8;
pub const DEFAULT_SIZE_SLACK: usize = 2;

/// Identity list used as deduction rules. Identities must be bar-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Basis {
    identities: Vec<Identity>,
}

impl Basis {
    pub fn new(identities: Vec<Identity>) -> Result<Self, WordError> {
        for id in &identities {
            let ok = match id {
                Identity::Pair(u, v) => u.is_semigroup_word() && v.is_semigroup_word(),
                Identity::Zero(w) => w.is_semigroup_word(),
            };
            if !ok {
                return Err(WordError::UnsupportedUnary);
            }
        }
        Ok(Basis { identities })
    }

    pub fn parse(lines: &[&str]) -> Result<Self, WordError> {
        Basis::new(lines.iter().map(|l| Identity::parse(l)).collect::<Result<_, _>>()?)
    }

    pub fn identities(&self) -> &[Identity] {
        &self.identities
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }

    /// Concatenation of two bases; rule indices of `other` are shifted by
    /// `self.len()`.
    pub fn union(&self, other: &Basis) -> Basis {
        let mut identities = self.identities.clone();
        identities.extend(other.identities.iter().cloned());
        Basis { identities }
    }
}

/// A node of the deduction graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Word(Word),
    Zero,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Word(w) => write!(f, "{w}"),
            Term::Zero => f.write_str("0"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Forward,
    Backward,
}

/// Which member of the literal system `w z ≈ w`, `z w ≈ w` a step used.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FreshSide {
    Right,
    Left,
}

/// One rewrite. For a pair rule `l ≈ r`, `Forward` turns `a σ(l) b` into
/// `a σ(r) b` and `Backward` does the reverse. For a native zero rule
/// `w ≈ 0`, `Forward` sends `a σ(w) b` to zero and `Backward` goes from zero
/// back to `a σ(w) b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule_index: usize,
    pub literal_side: Option<FreshSide>,
    pub orientation: Orientation,
    pub substitution: Substitution,
    pub left: Vec<Letter>,
    pub right: Vec<Letter>,
    pub result: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub start: Term,
    pub steps: Vec<TraceStep>,
}

impl Chain {
    pub fn end(&self) -> &Term {
        self.steps.last().map_or(&self.start, |s| &s.result)
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        core::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result))
    }
}

/// A proof: one chain per identity actually checked. Native proofs and
/// literal proofs of pair goals have a single chain; a literal proof of
/// `w ≈ 0` has two (`w c ≈ w` and `c w ≈ w` for a fresh `c`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeductionTrace {
    pub chains: Vec<Chain>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReplayError {
    #[error("chain {chain}, step {step}: rule index out of range")]
    UnknownRule { chain: usize, step: usize },
    #[error("chain {chain}, step {step}: the recorded factorization does not reproduce the source")]
    SourceMismatch { chain: usize, step: usize },
    #[error("chain {chain}, step {step}: the recorded rewrite does not produce the next term")]
    ResultMismatch { chain: usize, step: usize },
    #[error("chain {chain}, step {step}: substitution does not cover the rule")]
    Substitution { chain: usize, step: usize },
}

impl DeductionTrace {
    pub fn step_count(&self) -> usize {
        self.chains.iter().map(|c| c.steps.len()).sum()
    }

    /// Re-applies every step against `basis` and checks that it reproduces
    /// the next term exactly.
    pub fn replay(&self, basis: &Basis) -> Result<(), ReplayError> {
        for (ci, chain) in self.chains.iter().enumerate() {
            let mut current = chain.start.clone();
            for (si, step) in chain.steps.iter().enumerate() {
                let at = |e: fn(usize, usize) -> ReplayError| e(ci, si);
                let rule = basis
                    .identities
                    .get(step.rule_index)
                    .ok_or(at(|chain, step| ReplayError::UnknownRule { chain, step }))?;
                let (lhs, rhs) = literal_sides(rule, step.literal_side)
                    .ok_or(at(|chain, step| ReplayError::UnknownRule { chain, step }))?;
                let inst = |w: &Word| -> Result<Term, ReplayError> {
                    let core = w
                        .substitute(&step.substitution)
                        .map_err(|_| at(|chain, step| ReplayError::Substitution { chain, step }))?;
                    Ok(Term::Word(wrap(&step.left, &core, &step.right)))
                };
                let (from, to) = match (&rhs, step.orientation) {
                    (Some(r), Orientation::Forward) => (inst(&lhs)?, inst(r)?),
                    (Some(r), Orientation::Backward) => (inst(r)?, inst(&lhs)?),
                    (None, Orientation::Forward) => (inst(&lhs)?, Term::Zero),
                    (None, Orientation::Backward) => (Term::Zero, inst(&lhs)?),
                };
                if from != current {
                    return Err(at(|chain, step| ReplayError::SourceMismatch { chain, step }));
                }
                if to != step.result {
                    return Err(at(|chain, step| ReplayError::ResultMismatch { chain, step }));
                }
                current = to;
            }
        }
        Ok(())
    }

    /// Renaming permutations `π_i` with `u_{i+1} = π_i[u_i]` for a chain
    /// whose terms are all linear words on one content, or `None` otherwise.
    pub fn step_renamings(&self) -> Option<Vec<Permutation>> {
        let [chain] = self.chains.as_slice() else {
            return None;
        };
        let words: Vec<&Word> = chain
            .terms()
            .map(|t| match t {
                Term::Word(w) if w.is_linear() => Some(w),
                _ => None,
            })
            .collect::<Option<_>>()?;
        words.windows(2).map(|p| renaming_between(p[0], p[1])).collect()
    }

    /// Checks that the step renamings compose, left to right, to the
    /// renaming from the first word to the last. `None` when the chain leaves
    /// the linear words of its content.
    pub fn splice_check(&self) -> Option<bool> {
        let steps = self.step_renamings()?;
        let chain = &self.chains[0];
        let (Term::Word(first), Term::Word(last)) = (&chain.start, chain.end()) else {
            return None;
        };
        let overall = renaming_between(first, last)?;
        let n = overall.degree();
        let product = steps
            .iter()
            .try_fold(Permutation::identity(n), |acc, p| acc.then(p).ok())?;
        Some(product == overall)
    }
}

fn wrap(left: &[Letter], core: &Word, right: &[Letter]) -> Word {
    let mut letters: Vec<Letter> = left.to_vec();
    letters.extend(core.letters().expect("semigroup word").into_iter().cloned());
    letters.extend(right.iter().cloned());
    Word::from_letters(letters).expect("nonempty")
}

fn fresh_letter(avoid: &BTreeSet<Letter>) -> Letter {
    (1..)
        .map(|k| Letter::new(&alloc::format!("z{k}")).expect("valid name"))
        .find(|l| !avoid.contains(l))
        .expect("unbounded supply")
}

/// The (lhs, rhs) a step uses; `rhs = None` marks a native zero rule.
fn literal_sides(rule: &Identity, side: Option<FreshSide>) -> Option<(Word, Option<Word>)> {
    match (rule, side) {
        (Identity::Pair(l, r), None) => Some((l.clone(), Some(r.clone()))),
        (Identity::Zero(w), None) => Some((w.clone(), None)),
        (Identity::Zero(w), Some(side)) => {
            let z = Word::letter(fresh_letter(&w.content()));
            let grown = match side {
                FreshSide::Right => w.concat(&z),
                FreshSide::Left => z.concat(w),
            };
            Some((grown, Some(w.clone())))
        }
        (Identity::Pair(..), Some(_)) => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(DeductionTrace),
    Unknown,
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DeriveOptions {
    /// Maximal number of steps in a chain.
    pub depth_bound: usize,
    /// Maximal word length explored; `None` means goal length plus two.
    pub size_bound: Option<usize>,
    pub literal_zero: bool,
}

impl Default for DeriveOptions {
    fn default() -> Self {
        DeriveOptions {
            depth_bound: DEFAULT_DEPTH,
            size_bound: None,
            literal_zero: false,
        }
    }
}

/// Returns the index of a zero word `b` with `b <= w` and the containment
/// witness. For a basis of zero identities this decides derivability of
/// `w ≈ 0`.
pub fn zero_member(
    zero_words: &[Word],
    w: &Word,
) -> Result<Option<(usize, PatternWitness)>, WordError> {
    for (k, b) in zero_words.iter().enumerate() {
        if let Some(wit) = pattern_leq(b, w)? {
            return Ok(Some((k, wit)));
        }
    }
    Ok(None)
}

/// All terms one step away from `w` by `id`, in both orientations, with
/// results longer than `size_bound` dropped. Letters of a rule side that do
/// not occur on the matched side are instantiated by letters of `w`.
pub fn one_step_rewrites(
    w: &Word,
    id: &Identity,
    size_bound: usize,
) -> Result<BTreeSet<Term>, WordError> {
    let basis = Basis::new(alloc::vec![id.clone()])?;
    let engine = Engine::new(&basis, false);
    let mut alphabet = Alphabet::default();
    let start = alphabet.encode(w)?;
    let mut out = BTreeSet::new();
    engine.neighbours(&Node::Word(start), alphabet.len(), size_bound, |node, _| {
        out.insert(alphabet.decode(&node));
    });
    Ok(out)
}

/// Bidirectional bounded search for a deduction of `goal` from `basis`.
/// `Proved` traces always replay; `Unknown` refutes nothing.
pub fn derive(basis: &Basis, goal: &Identity, opts: &DeriveOptions) -> Result<Verdict, WordError> {
    Deriver::new(basis, opts).derive(goal)
}

/// A basis compiled once for repeated [`derive`] calls.
pub struct Deriver {
    engine: Engine,
    opts: DeriveOptions,
}

impl Deriver {
    pub fn new(basis: &Basis, opts: &DeriveOptions) -> Self {
        Deriver {
            engine: Engine::new(basis, opts.literal_zero),
            opts: *opts,
        }
    }

    pub fn derive(&self, goal: &Identity) -> Result<Verdict, WordError> {
        match goal {
            Identity::Pair(u, v) => {
                let size = self.size_for(&[u, v])?;
                Ok(match self.connect(&Term::Word(u.clone()), &Term::Word(v.clone()), &goal.content(), size)? {
                    Some(chain) => Verdict::Proved(DeductionTrace { chains: vec![chain] }),
                    None => Verdict::Unknown,
                })
            }
            Identity::Zero(w) if !self.opts.literal_zero => {
                let size = self.size_for(&[w])?;
                Ok(match self.connect(&Term::Word(w.clone()), &Term::Zero, &w.content(), size)? {
                    Some(chain) => Verdict::Proved(DeductionTrace { chains: vec![chain] }),
                    None => Verdict::Unknown,
                })
            }
            Identity::Zero(w) => {
                let c = Word::letter(fresh_letter(&w.content()));
                let mut chains = Vec::new();
                for grown in [w.concat(&c), c.concat(w)] {
                    let size = self.size_for(&[&grown])?;
                    let letters = grown.content();
                    match self.connect(&Term::Word(grown), &Term::Word(w.clone()), &letters, size)? {
                        Some(chain) => chains.push(chain),
                        None => return Ok(Verdict::Unknown),
                    }
                }
                Ok(Verdict::Proved(DeductionTrace { chains }))
            }
        }
    }

    fn size_for(&self, words: &[&Word]) -> Result<usize, WordError> {
        let mut longest = 0;
        for w in words {
            match w.length() {
                WordLength::Finite(k) => longest = longest.max(k),
                WordLength::Infinite => return Err(WordError::UnsupportedUnary),
            }
        }
        Ok(self.opts.size_bound.unwrap_or(longest + DEFAULT_SIZE_SLACK))
    }

    fn connect(
        &self,
        from: &Term,
        to: &Term,
        letters: &BTreeSet<Letter>,
        size: usize,
    ) -> Result<Option<Chain>, WordError> {
        let mut alphabet = Alphabet::default();
        for l in letters {
            alphabet.intern(l);
        }
        let a = alphabet.encode_term(from)?;
        let b = alphabet.encode_term(to)?;
        let k = alphabet.len();
        let search = Search::run(&self.engine, a, b, k, size, self.opts.depth_bound);
        Ok(search.map(|path| self.engine.to_chain(&alphabet, path)))
    }
}

/// Connected components of the one-step rewriting graph on all words over
/// `letters` of length at most `max_len` (zero included as a node).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureClasses {
    pub words: Vec<Word>,
    pub class: Vec<usize>,
    /// Class of the zero node, when some word reaches it.
    pub zero_class: Option<usize>,
}

pub fn closure_classes(basis: &Basis, letters: &[Letter], max_len: usize) -> Result<ClosureClasses, WordError> {
    let engine = Engine::new(basis, false);
    let mut alphabet = Alphabet::default();
    for l in letters {
        alphabet.intern(l);
    }
    let words = crate::words::words_up_to(letters, max_len);
    let mut index: BTreeMap<Node, usize> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        index.insert(Node::Word(alphabet.encode(w)?), i);
    }
    let zero = words.len();
    index.insert(Node::Zero, zero);
    let mut parent: Vec<usize> = (0..=zero).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let nodes: Vec<(Node, usize)> = index.iter().map(|(n, &i)| (n.clone(), i)).collect();
    for (node, i) in nodes {
        let mut targets = Vec::new();
        engine.neighbours(&node, alphabet.len(), max_len, |n, _| targets.push(n));
        for t in targets {
            let j = index[&t];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..=zero).map(|i| find(&mut parent, i)).collect();
    let mut ids: BTreeMap<usize, usize> = BTreeMap::new();
    let class: Vec<usize> = roots[..zero]
        .iter()
        .map(|r| {
            let next = ids.len();
            *ids.entry(*r).or_insert(next)
        })
        .collect();
    let zero_class = ids.get(&roots[zero]).copied();
    Ok(ClosureClasses { words, class, zero_class })
}

// ---------------------------------------------------------------------------
// Internal engine on letter codes.

type Code = u16;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    Word(Vec<Code>),
    Zero,
}

#[derive(Default)]
struct Alphabet {
    letters: Vec<Letter>,
    index: BTreeMap<Letter, Code>,
}

impl Alphabet {
    fn intern(&mut self, l: &Letter) -> Code {
        if let Some(&c) = self.index.get(l) {
            return c;
        }
        let c = self.letters.len() as Code;
        self.letters.push(l.clone());
        self.index.insert(l.clone(), c);
        c
    }

    fn len(&self) -> usize {
        self.letters.len()
    }

    fn encode(&mut self, w: &Word) -> Result<Vec<Code>, WordError> {
        let letters = w.letters().ok_or(WordError::UnsupportedUnary)?;
        Ok(letters.into_iter().map(|l| self.intern(l)).collect())
    }

    fn encode_term(&mut self, t: &Term) -> Result<Node, WordError> {
        Ok(match t {
            Term::Word(w) => Node::Word(self.encode(w)?),
            Term::Zero => Node::Zero,
        })
    }

    fn word(&self, codes: &[Code]) -> Word {
        Word::from_letters(codes.iter().map(|&c| self.letters[c as usize].clone()).collect())
            .expect("nonempty")
    }

    fn decode(&self, n: &Node) -> Term {
        match n {
            Node::Word(w) => Term::Word(self.word(w)),
            Node::Zero => Term::Zero,
        }
    }
}

/// One directed rule: `lhs` rewrites to `rhs` (or to zero). Rule letters are
/// numbered `0..vars`.
struct Rule {
    basis_index: usize,
    literal_side: Option<FreshSide>,
    orientation: Orientation,
    lhs: Vec<usize>,
    rhs: Option<Vec<usize>>,
    vars: Vec<Letter>,
}

#[derive(Clone, Debug)]
struct Move {
    rule: usize,
    start: usize,
    end: usize,
    bindings: Vec<Vec<Code>>,
}

struct Engine {
    rules: Vec<Rule>,
}

impl Engine {
    fn new(basis: &Basis, literal_zero: bool) -> Self {
        let mut rules = Vec::new();
        for (i, id) in basis.identities.iter().enumerate() {
            let sides: Vec<Option<FreshSide>> = match id {
                Identity::Zero(_) if literal_zero => vec![Some(FreshSide::Right), Some(FreshSide::Left)],
                _ => vec![None],
            };
            for side in sides {
                let (l, r) = literal_sides(id, side).expect("matching kinds");
                let mut vars: Vec<Letter> = l.content().into_iter().collect();
                if let Some(r) = &r {
                    for x in r.content() {
                        if !vars.contains(&x) {
                            vars.push(x);
                        }
                    }
                }
                let code = |w: &Word| -> Vec<usize> {
                    w.letters()
                        .expect("basis words are bar-free")
                        .into_iter()
                        .map(|x| vars.iter().position(|v| v == x).expect("interned"))
                        .collect()
                };
                let (lc, rc) = (code(&l), r.as_ref().map(code));
                rules.push(Rule {
                    basis_index: i,
                    literal_side: side,
                    orientation: Orientation::Forward,
                    lhs: lc.clone(),
                    rhs: rc.clone(),
                    vars: vars.clone(),
                });
                if let Some(rc) = rc {
                    rules.push(Rule {
                        basis_index: i,
                        literal_side: side,
                        orientation: Orientation::Backward,
                        lhs: rc,
                        rhs: Some(lc),
                        vars,
                    });
                }
            }
        }
        Engine { rules }
    }

    /// Calls `f` on each neighbour of `node` together with the move used.
    /// Native zero rules only need one witness per word.
    fn neighbours(&self, node: &Node, alphabet: usize, size: usize, mut f: impl FnMut(Node, Move)) {
        let Node::Word(w) = node else { return };
        for (ri, rule) in self.rules.iter().enumerate() {
            match &rule.rhs {
                None => {
                    if let Some((start, end, b)) = first_match(&rule.lhs, rule.vars.len(), w) {
                        f(Node::Zero, Move { rule: ri, start, end, bindings: b });
                    }
                }
                Some(rhs) => {
                    all_matches(&rule.lhs, rule.vars.len(), w, |start, end, bound| {
                        let fixed = end - start;
                        let extra: Vec<usize> = (0..rule.vars.len()).filter(|&v| bound[v].is_none()).collect();
                        let known: usize = rhs
                            .iter()
                            .filter_map(|&v| bound[v].map(|(s, e)| e - s))
                            .sum();
                        let extra_count = rhs.iter().filter(|&&v| bound[v].is_none()).count();
                        let new_len = w.len() - fixed + known + extra_count;
                        if new_len > size || (!extra.is_empty() && alphabet == 0) {
                            return;
                        }
                        let mut choice = vec![0 as Code; extra.len()];
                        loop {
                            let mut bindings: Vec<Vec<Code>> = (0..rule.vars.len())
                                .map(|v| bound[v].map_or(Vec::new(), |(s, e)| w[s..e].to_vec()))
                                .collect();
                            for (k, &v) in extra.iter().enumerate() {
                                bindings[v] = vec![choice[k]];
                            }
                            let mut out = w[..start].to_vec();
                            for &v in rhs {
                                out.extend_from_slice(&bindings[v]);
                            }
                            out.extend_from_slice(&w[end..]);
                            f(Node::Word(out), Move { rule: ri, start, end, bindings });
                            // odometer over extra letters
                            let mut k = 0;
                            loop {
                                if k == choice.len() {
                                    return;
                                }
                                choice[k] += 1;
                                if (choice[k] as usize) < alphabet {
                                    break;
                                }
                                choice[k] = 0;
                                k += 1;
                            }
                        }
                    });
                }
            }
        }
    }

    /// Turns a node path into a public chain. `path[i].1` is the move that
    /// leads from `path[i-1]` to `path[i]` and whether it was found from the
    /// far end (and so is applied reversed).
    fn to_chain(&self, alphabet: &Alphabet, path: Vec<(Node, Option<(Move, bool)>)>) -> Chain {
        let mut iter = path.into_iter();
        let (first, _) = iter.next().expect("nonempty path");
        let mut prev = first.clone();
        let mut steps = Vec::new();
        for (node, mv) in iter {
            let (mv, reversed) = mv.expect("every later node has a move");
            let rule = &self.rules[mv.rule];
            // The move rewrites the word it was applied to; that is `prev`
            // normally and `node` when the edge was found from the far end.
            let host = if reversed { &node } else { &prev };
            let Node::Word(hw) = host else { unreachable!("moves apply to words") };
            let substitution = Substitution::from_pairs(
                rule.vars
                    .iter()
                    .zip(&mv.bindings)
                    .map(|(x, b)| (x.clone(), alphabet.word(b))),
            );
            let mut orientation = rule.orientation;
            if reversed {
                orientation = match orientation {
                    Orientation::Forward => Orientation::Backward,
                    Orientation::Backward => Orientation::Forward,
                };
            }
            // Backward rules store the identity's rhs as their lhs; the
            // public substitution is stated on identity letters either way.
            steps.push(TraceStep {
                rule_index: rule.basis_index,
                literal_side: rule.literal_side,
                orientation,
                substitution,
                left: hw[..mv.start].iter().map(|&c| alphabet.letters[c as usize].clone()).collect(),
                right: hw[mv.end..].iter().map(|&c| alphabet.letters[c as usize].clone()).collect(),
                result: alphabet.decode(&node),
            });
            prev = node;
        }
        Chain {
            start: alphabet.decode(&first),
            steps,
        }
    }
}

/// Enumerates every `(start, end, bindings)` with `w[start..end] = σ(pattern)`.
fn all_matches(
    pattern: &[usize],
    vars: usize,
    w: &[Code],
    mut f: impl FnMut(usize, usize, &[Option<(usize, usize)>]),
) {
    let mut bound: Vec<Option<(usize, usize)>> = vec![None; vars];
    for start in 0..w.len() {
        match_from(pattern, 0, start, w, &mut bound, &mut |end, b| f(start, end, b));
    }
}

fn first_match(pattern: &[usize], vars: usize, w: &[Code]) -> Option<(usize, usize, Vec<Vec<Code>>)> {
    let mut found = None;
    let mut bound: Vec<Option<(usize, usize)>> = vec![None; vars];
    for start in 0..w.len() {
        match_from(pattern, 0, start, w, &mut bound, &mut |end, b| {
            if found.is_none() {
                let bindings = b
                    .iter()
                    .map(|s| s.map_or(Vec::new(), |(x, y)| w[x..y].to_vec()))
                    .collect();
                found = Some((start, end, bindings));
            }
        });
        if found.is_some() {
            break;
        }
    }
    found
}

fn match_from(
    pattern: &[usize],
    k: usize,
    pos: usize,
    w: &[Code],
    bound: &mut [Option<(usize, usize)>],
    f: &mut dyn FnMut(usize, &[Option<(usize, usize)>]),
) {
    if k == pattern.len() {
        f(pos, bound);
        return;
    }
    let v = pattern[k];
    if let Some((s, e)) = bound[v] {
        let len = e - s;
        if pos + len <= w.len() && w[pos..pos + len] == w[s..e] {
            match_from(pattern, k + 1, pos + len, w, bound, f);
        }
        return;
    }
    let rest = pattern.len() - k - 1;
    let max_len = w.len().saturating_sub(pos + rest);
    for len in 1..=max_len {
        bound[v] = Some((pos, pos + len));
        match_from(pattern, k + 1, pos + len, w, bound, f);
    }
    bound[v] = None;
}

struct Search;

impl Search {
    /// Layered bidirectional BFS. Returns the node path from `a` to `b` with
    /// the move into each node, or `None` if the two balls of combined
    /// radius `depth` do not meet.
    fn run(
        engine: &Engine,
        a: Node,
        b: Node,
        alphabet: usize,
        size: usize,
        depth: usize,
    ) -> Option<Vec<(Node, Option<(Move, bool)>)>> {
        if a == b {
            return Some(vec![(a, None)]);
        }
        struct Side {
            seen: BTreeMap<Node, (Option<Node>, Option<Move>)>,
            frontier: VecDeque<Node>,
            radius: usize,
        }
        let side = |n: Node| Side {
            seen: BTreeMap::from([(n.clone(), (None, None))]),
            frontier: VecDeque::from([n]),
            radius: 0,
        };
        let mut sides = [side(a), side(b)];
        let mut meet: Option<Node> = None;
        while meet.is_none() && sides[0].radius + sides[1].radius < depth {
            let k = match (sides[0].frontier.is_empty(), sides[1].frontier.is_empty()) {
                (true, true) => break,
                (true, false) => 1,
                (false, true) => 0,
                _ if sides[0].frontier.len() <= sides[1].frontier.len() => 0,
                _ => 1,
            };
            let layer: Vec<Node> = sides[k].frontier.drain(..).collect();
            let mut next = VecDeque::new();
            for node in layer {
                let mut found = Vec::new();
                engine.neighbours(&node, alphabet, size, |n, mv| found.push((n, mv)));
                for (n, mv) in found {
                    if sides[k].seen.contains_key(&n) {
                        continue;
                    }
                    sides[k].seen.insert(n.clone(), (Some(node.clone()), Some(mv)));
                    if meet.is_none() && sides[1 - k].seen.contains_key(&n) {
                        meet = Some(n.clone());
                    }
                    next.push_back(n);
                }
            }
            sides[k].frontier = next;
            sides[k].radius += 1;
        }
        let meet = meet?;
        let mut path: Vec<(Node, Option<(Move, bool)>)> = Vec::new();
        // from a to meet
        let mut cur = meet.clone();
        let mut back = Vec::new();
        loop {
            let (parent, mv) = sides[0].seen[&cur].clone();
            back.push((cur.clone(), mv.map(|m| (m, false))));
            match parent {
                Some(p) => cur = p,
                None => break,
            }
        }
        back.reverse();
        // back[0] is `a` (no move); each later entry carries its incoming move.
        path.extend(back);
        // from meet to b: an edge parent -> child on b's side is traversed
        // child -> parent, so the move recorded at the child is reversed.
        let mut cur = meet;
        loop {
            let (parent, mv) = sides[1].seen[&cur].clone();
            match parent {
                Some(p) => {
                    path.push((p.clone(), mv.map(|m| (m, true))));
                    cur = p;
                }
                None => break,
            }
        }
        Some(path)
    }
}

/// Renders a trace as text lines `term  [rule k, orientation]`.
pub fn render_chain(chain: &Chain) -> String {
    let mut out = alloc::format!("{}", chain.start);
    for s in &chain.steps {
        out.push_str(&alloc::format!(" -> {} [rule {}]", s.result, s.rule_index));
    }
    out
}
