//! Seeded random finite lattices for property sweeps.

use rand::Rng;
use varlat_core::{FiniteLattice, LatticeError};

/// Default seed for every randomized suite.
pub const DEFAULT_SEED: u64 = 0x5eed_1a77;

/// A random lattice with between 1 and `max_size` elements.
///
/// Draws a random DAG on the inner elements (edges only from lower to higher
/// index), puts a bottom below and a top above everything, and retries until
/// the closure has all meets and joins.
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> FiniteLattice {
    assert!(max_size >= 1, "lattices are nonempty");
    loop {
        let size = rng.gen_range(1..=max_size);
        if size <= 2 {
            return FiniteLattice::chain(size).expect("nonempty chain");
        }
        let (bottom, top) = (0, size - 1);
        let density: f64 = rng.gen_range(0.15..0.7);
        let mut covers = Vec::new();
        for i in 1..top {
            covers.push((bottom, i));
            covers.push((i, top));
            for j in i + 1..top {
                if rng.gen_bool(density) {
                    covers.push((i, j));
                }
            }
        }
        match FiniteLattice::from_covers(size, &covers, None) {
            Ok(l) => return l,
            Err(LatticeError::NotALattice(..)) => continue,
            Err(e) => unreachable!("forward edges cannot fail otherwise: {e}"),
        }
    }
}
