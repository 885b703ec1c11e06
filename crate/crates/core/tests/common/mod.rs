#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use mpres::{Prime, SimplicialComplex};

pub fn corpus(name: &str) -> Arc<SimplicialComplex> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.json"));
    Arc::new(mpres::io::read_complex(&path).unwrap())
}

pub fn k(m: &[&[usize]]) -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::closure_from_maximal(&m.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap())
}

pub fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

/// Brute-force Betti numbers: closes the maximal simplices by subset
/// enumeration, writes integer boundary matrices and row reduces them mod p
/// with plain Gaussian elimination. Shares no code with the library.
pub fn oracle_betti(maximal: &[Vec<usize>], p: i64) -> Vec<usize> {
    let mut faces: Vec<BTreeSet<Vec<usize>>> = Vec::new();
    for s in maximal {
        let mut s = s.clone();
        s.sort();
        for mask in 1u32..(1 << s.len()) {
            let f: Vec<usize> = (0..s.len()).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
            let d = f.len() - 1;
            if faces.len() <= d {
                faces.resize(d + 1, BTreeSet::new());
            }
            faces[d].insert(f);
        }
    }
    let faces: Vec<Vec<Vec<usize>>> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
    let top = faces.len();
    let mut ranks = vec![0usize; top + 1];
    for d in 1..top {
        let rows = &faces[d - 1];
        let mut m: Vec<Vec<i64>> = vec![vec![0; faces[d].len()]; rows.len()];
        for (j, s) in faces[d].iter().enumerate() {
            for skip in 0..s.len() {
                let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                let i = rows.iter().position(|r| *r == f).unwrap();
                m[i][j] = if skip % 2 == 0 { 1 } else { p - 1 };
            }
        }
        ranks[d] = rank_mod(m, p);
    }
    (0..top).map(|d| faces[d].len() - ranks[d] - ranks[d + 1]).collect()
}

pub fn rank_mod(mut m: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(r) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, r);
        let inv = (1..p).find(|x| (m[rank][c] * x) % p == 1).unwrap();
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] % p != 0 {
                let f = m[r][c];
                for j in 0..cols {
                    m[r][j] = ((m[r][j] - f * m[rank][j]) % p + p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn maximal_of(k: &SimplicialComplex) -> Vec<Vec<usize>> {
    k.maximal_simplices().iter().map(|s| s.vertices().to_vec()).collect()
}
