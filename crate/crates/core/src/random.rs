//! Seeded random connected 2-complexes, and the cover suite run over them.

use std::sync::Arc;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::SimplicialComplex;
use crate::cover::{build_cover, verify_cover};
use crate::error::Result;
use crate::homology::homology_basis;
use crate::linalg::Prime;
use crate::report::{Target, VerificationReport};

pub const MAX_VERTICES: usize = 10;

/// Largest first Betti number accepted for `p`; keeps covers small.
fn max_rank(p: Prime) -> usize {
    if p.get() == 2 {
        4
    } else {
        3
    }
}

/// One candidate: a Hamiltonian path on a shuffled vertex set, some random
/// triangles and a few extra edges. Always connected.
fn candidate(rng: &mut ChaCha8Rng) -> SimplicialComplex {
    let n = rng.gen_range(4..=MAX_VERTICES);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut maximal: Vec<Vec<usize>> = order.windows(2).map(|w| w.to_vec()).collect();
    for _ in 0..rng.gen_range(1..=n) {
        maximal.push(index::sample(rng, n, 3).into_vec());
    }
    for _ in 0..rng.gen_range(0..=n / 2) {
        maximal.push(index::sample(rng, n, 2).into_vec());
    }
    SimplicialComplex::closure_from_maximal(&maximal).expect("random simplices are valid")
}

/// Connected 2-complexes on at most ten vertices whose `H_1(-; F_p)` has
/// rank at most 4 (p = 2) or 3 (otherwise). Same seed, same complexes.
pub fn random_complexes(seed: u64, count: usize, p: Prime) -> Vec<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((p.get() as u64) << 32));
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let k = candidate(&mut rng);
        if homology_basis(&k, 1, p, false).rank() <= max_rank(p) {
            let name = format!("random-{seed}-p{p}-{}", out.len());
            out.push(k.with_name(name));
        }
    }
    out
}

/// Builds and verifies the cover of `count` random complexes for each of
/// `p = 2, 3`. Check targets name the complex.
pub fn random_cover_suite(seed: u64, count: usize) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    for p in [2u64, 3] {
        let p = Prime::new(p)?;
        for k in random_complexes(seed, count, p) {
            let k = Arc::new(k);
            let c = build_cover(&k, p)?;
            for mut ch in verify_cover(&c).checks {
                ch.simplex = Target::Named(format!("{} (l = {})", k.name(), c.l()));
                checks.push(ch);
            }
        }
    }
    Ok(VerificationReport { checks })
}
