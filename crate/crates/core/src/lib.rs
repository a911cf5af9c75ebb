//! Computational core for cancellable elements in lattices of nil-semigroup
//! varieties.
//!
//! The crate is `no_std` (it only needs `alloc`) and carries no IO. It is
//! organized bottom-up:
//!
//! - [`lattice`]: explicit finite lattices and brute-force classification of
//!   neutral, distributive, standard, modular and cancellable elements.
//! - [`perm`]: permutations of `{1..n}`, subgroup closure and the complete
//!   subgroup lattice of `S_n` for `n <= 5`.
//! - [`words`]: words of the free unary semigroup, identities, substitutions
//!   and the pattern-containment order on semigroup words.
//! - [`deduction`]: bounded equational deduction with replayable traces.
//! - [`varieties`]: the decidable variety handles `X_{m,n}`, `Y_{m,n}` and the
//!   subgroup-derived varieties `D(G, n)`, with relatively free objects, bounded
//!   theories and the subgroup witness harness.
//! - [`unary`]: the one-letter epigroup normalizer.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

mod bits;
pub mod deduction;
pub mod lattice;
pub mod perm;
pub mod unary;
pub mod varieties;
pub mod words;

pub use deduction::{Basis, DeductionTrace, DeriveOptions, Verdict};
pub use lattice::{ElementClassification, FiniteLattice, LatticeError};
pub use perm::{PermError, Permutation, Subgroup};
pub use varieties::{Bound, FamilyKind, VarietyError, VarietyHandle};
pub use words::{Identity, Letter, Substitution, Word, WordError};
