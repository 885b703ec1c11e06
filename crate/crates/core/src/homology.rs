//! Simplicial homology with F_p coefficients.
//!
//! Cohomology is never computed separately: over a field the map induced on
//! `H^k` is the transpose of the map on `H_k`, so a restriction `H^1(B) ->
//! H^1(A)` is onto exactly when the inclusion-induced `H_1(A) -> H_1(B)` is
//! one-to-one.

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{validation, Error, Result};
use crate::linalg::{EchelonBasis, FpMatrix, Prime};
use crate::map::SimplicialMap;

/// Matrix of `∂_k : C_k -> C_{k-1}` in the canonical simplex bases, with
/// sign `(-1)^i` on the face omitting the `i`-th vertex.
pub fn boundary_matrix(k: &SimplicialComplex, dim: usize, p: Prime) -> Result<FpMatrix> {
    match k.dim() {
        Some(top) if dim >= 1 && dim <= top => Ok(boundary_unchecked(k, dim, p)),
        _ => Err(validation(format!("boundary dimension {dim} out of range for {:?}", k.dim()))),
    }
}

fn boundary_unchecked(k: &SimplicialComplex, dim: usize, p: Prime) -> FpMatrix {
    let mut m = FpMatrix::zeros(p, k.count(dim - 1), k.count(dim));
    for (j, s) in k.simplices(dim).iter().enumerate() {
        for (i, face) in s.boundary_faces().enumerate() {
            let row = k.index_of(&face).expect("complex is closed under faces");
            m.set(row, j, p.sign(i));
        }
    }
    m
}

/// The chain complex `C_*(K; F_p)`.
#[derive(Clone, Debug)]
pub struct ChainComplexFp {
    pub p: Prime,
    pub ranks: Vec<usize>,
    /// `boundaries[k]` is `∂_k`; index 0 is a 0×n₀ placeholder.
    pub boundaries: Vec<FpMatrix>,
}

impl ChainComplexFp {
    pub fn new(k: &SimplicialComplex, p: Prime) -> Self {
        let ranks = k.f_vector();
        let mut boundaries = vec![FpMatrix::zeros(p, 0, ranks.first().copied().unwrap_or(0))];
        for d in 1..ranks.len() {
            boundaries.push(boundary_unchecked(k, d, p));
        }
        ChainComplexFp { p, ranks, boundaries }
    }

    /// Checks `∂_k ∘ ∂_{k+1} = 0` for every k.
    pub fn check_square_zero(&self) -> Result<()> {
        for k in 1..self.boundaries.len().saturating_sub(1) {
            if !self.boundaries[k].mul(&self.boundaries[k + 1])?.is_zero() {
                return Err(Error::Internal(format!("∂_{k} ∘ ∂_{} ≠ 0", k + 1)));
            }
        }
        Ok(())
    }
}

/// A basis of `H_k(K; F_p)` by cycle representatives, with a solver that
/// expresses any cycle in it.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    pub dim: usize,
    pub p: Prime,
    pub reduced: bool,
    pub representatives: Vec<Vec<u32>>,
    pub boundary_basis: Vec<Vec<u32>>,
    solver: EchelonBasis,
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.representatives.len()
    }

    /// Coordinates of the class of `cycle`. Errors with
    /// [`Error::NotInSpan`] when `cycle` is not a cycle.
    pub fn coordinates(&self, cycle: &[u32]) -> Result<Vec<u32>> {
        self.solver.tag_of(cycle)
    }
}

/// Homology basis in dimension `dim`. Representatives are chosen greedily
/// from the canonical kernel basis of `∂_dim`, skipping those dependent on
/// boundaries and earlier choices. `reduced` only affects `dim = 0`.
pub fn homology_basis(k: &SimplicialComplex, dim: usize, p: Prime, reduced: bool) -> HomologyBasis {
    let n = k.count(dim);
    let cycles: Vec<Vec<u32>> = if dim == 0 {
        if reduced && n > 0 {
            FpMatrix::from_columns(p, 1, &vec![vec![1]; n]).kernel_basis()
        } else {
            (0..n).map(|i| unit(n, i)).collect()
        }
    } else if n == 0 {
        Vec::new()
    } else {
        boundary_unchecked(k, dim, p).kernel_basis()
    };

    let mut untagged = EchelonBasis::new(p, n, 0);
    let mut boundary_basis = Vec::new();
    if k.count(dim + 1) > 0 {
        let d = boundary_unchecked(k, dim + 1, p);
        for j in 0..d.cols() {
            let col = d.column(j);
            if untagged.insert_untagged(&col) {
                boundary_basis.push(col);
            }
        }
    }
    let rank = cycles.len() - boundary_basis.len();
    let mut solver = EchelonBasis::new(p, n, rank);
    for b in &boundary_basis {
        solver.insert_untagged(b);
    }
    let mut representatives = Vec::with_capacity(rank);
    for z in cycles {
        if representatives.len() == rank {
            break;
        }
        let mut tag = vec![0; rank];
        tag[representatives.len()] = 1;
        if solver.insert(&z, &tag) {
            representatives.push(z);
        }
    }
    debug_assert_eq!(representatives.len(), rank);
    HomologyBasis { dim, p, reduced, representatives, boundary_basis, solver }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Betti numbers `dim H_k(K; F_p)` for `k = 0..=dim K` (unreduced).
pub fn betti_numbers(k: &SimplicialComplex, p: Prime) -> Vec<usize> {
    let f = k.f_vector();
    let ranks: Vec<usize> = (0..=f.len()).map(|d| if d == 0 || d >= f.len() { 0 } else { boundary_unchecked(k, d, p).rank() }).collect();
    (0..f.len()).map(|d| f[d] - ranks[d] - ranks[d + 1]).collect()
}

/// Image of a k-chain under the chain map of `f`. Degenerate simplices go
/// to zero; otherwise the sign is that of the permutation sorting the images.
pub fn push_chain(f: &SimplicialMap, dim: usize, chain: &[u32], p: Prime) -> Vec<u32> {
    let dom = f.domain();
    let cod = f.codomain();
    let mut out = vec![0; cod.count(dim)];
    for (j, s) in dom.simplices(dim).iter().enumerate() {
        let c = chain[j];
        if c == 0 {
            continue;
        }
        let imgs: Vec<usize> = s.vertices().iter().map(|&v| f.apply(v)).collect();
        let Some(odd) = permutation_parity(&imgs) else { continue };
        let target = cod.index_of(&Simplex::collapse(imgs)).expect("simplicial map");
        let c = if odd { p.neg(c) } else { c };
        out[target] = p.add(out[target], c);
    }
    out
}

/// Parity of the sorting permutation, or `None` on a repeated entry.
fn permutation_parity(v: &[usize]) -> Option<bool> {
    let mut odd = false;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            match v[i].cmp(&v[j]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => odd = !odd,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    Some(odd)
}

/// Matrix of `f_*` between given bases (rows: codomain, columns: domain).
pub fn induced_map_with(f: &SimplicialMap, dom: &HomologyBasis, cod: &HomologyBasis) -> Result<FpMatrix> {
    let p = dom.p;
    let mut m = FpMatrix::zeros(p, cod.rank(), dom.rank());
    for (j, z) in dom.representatives.iter().enumerate() {
        let image = push_chain(f, dom.dim, z, p);
        let coords = cod.coordinates(&image).map_err(|_| Error::Internal("image of a cycle is not a cycle".into()))?;
        for (i, c) in coords.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

/// Matrix of `f_* : H_k(domain) -> H_k(codomain)` (unreduced) in the
/// canonical homology bases. The cohomology map is its transpose.
pub fn induced_map_on_homology(f: &SimplicialMap, dim: usize, p: Prime) -> Result<FpMatrix> {
    let dom = homology_basis(f.domain(), dim, p, false);
    let cod = homology_basis(f.codomain(), dim, p, false);
    induced_map_with(f, &dom, &cod)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Iso,
    Mono,
    Epi,
    Neither,
}

impl Classification {
    pub fn of(m: &FpMatrix) -> Self {
        let r = m.rank();
        match (r == m.cols(), r == m.rows()) {
            (true, true) => Classification::Iso,
            (true, false) => Classification::Mono,
            (false, true) => Classification::Epi,
            (false, false) => Classification::Neither,
        }
    }

    pub fn is_mono(self) -> bool {
        matches!(self, Classification::Iso | Classification::Mono)
    }

    pub fn is_epi(self) -> bool {
        matches!(self, Classification::Iso | Classification::Epi)
    }

    /// Classification of the dual (cohomology) map.
    pub fn dual(self) -> Self {
        match self {
            Classification::Mono => Classification::Epi,
            Classification::Epi => Classification::Mono,
            c => c,
        }
    }
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::Iso => "iso",
            Classification::Mono => "mono",
            Classification::Epi => "epi",
            Classification::Neither => "neither",
        };
        f.write_str(s)
    }
}

/// An induced map with its classification and ranks.
#[derive(Clone, Debug)]
pub struct Restriction {
    pub classification: Classification,
    pub matrix: FpMatrix,
    pub domain_rank: usize,
    pub codomain_rank: usize,
    pub map_rank: usize,
}

impl Restriction {
    fn from_matrix(matrix: FpMatrix) -> Self {
        let map_rank = matrix.rank();
        Restriction {
            classification: Classification::of(&matrix),
            domain_rank: matrix.cols(),
            codomain_rank: matrix.rows(),
            map_rank,
            matrix,
        }
    }

    /// Classification of the restriction on cohomology `H^k(codomain) -> H^k(domain)`.
    pub fn cohomology_classification(&self) -> Classification {
        self.classification.dual()
    }
}

/// Classifies `H_k` of a subcomplex inclusion. Errors when the map is not
/// injective on vertices.
pub fn restriction_classification(inclusion: &SimplicialMap, dim: usize, p: Prime) -> Result<Restriction> {
    if !inclusion.is_inclusion() {
        return Err(validation("map is not the inclusion of a subcomplex"));
    }
    Ok(Restriction::from_matrix(induced_map_on_homology(inclusion, dim, p)?))
}

/// Classifies an arbitrary induced map.
pub fn classify_map(f: &SimplicialMap, dim: usize, p: Prime) -> Result<Restriction> {
    Ok(Restriction::from_matrix(induced_map_on_homology(f, dim, p)?))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    fn k(m: &[&[usize]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::closure_from_maximal(&m.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap())
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn boundary_examples() {
        let c3 = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        let d1 = boundary_matrix(&c3, 1, p(2)).unwrap();
        for j in 0..3 {
            assert_eq!(d1.column(j).iter().sum::<u32>(), 2);
        }
        let tri = k(&[&[0, 1, 2]]);
        assert_eq!(boundary_matrix(&tri, 2, p(2)).unwrap().column(0), vec![1, 1, 1]);
        assert!(boundary_matrix(&tri, 3, p(2)).is_err());
        assert!(boundary_matrix(&tri, 0, p(2)).is_err());
        ChainComplexFp::new(&tri, p(3)).check_square_zero().unwrap();
    }

    #[test]
    fn circle_and_disk() {
        let c3 = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        for q in [2, 3, 5] {
            assert_eq!(homology_basis(&c3, 1, p(q), false).rank(), 1);
        }
        assert_eq!(betti_numbers(&k(&[&[0, 1, 2]]), p(2)), vec![1, 0, 0]);
        assert_eq!(homology_basis(&c3, 0, p(2), true).rank(), 0);
        assert_eq!(homology_basis(&c3, 0, p(2), false).rank(), 1);
    }

    #[test]
    fn identity_and_constant_maps() {
        let c3 = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        let id = SimplicialMap::identity(c3.clone());
        assert_eq!(induced_map_on_homology(&id, 1, p(3)).unwrap(), FpMatrix::identity(p(3), 1));
        let pt = k(&[&[0]]);
        let c = SimplicialMap::new(c3, pt, vec![0, 0, 0]).unwrap();
        let m = induced_map_on_homology(&c, 1, p(3)).unwrap();
        assert_eq!((m.rows(), m.cols()), (0, 1));
    }

    #[test]
    fn double_wrap_is_zero_mod_two_only() {
        let hex = k(&[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]]);
        let tri = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        let f = SimplicialMap::new(hex, tri, (0..6).map(|i| i % 3).collect()).unwrap();
        assert!(induced_map_on_homology(&f, 1, p(2)).unwrap().is_zero());
        let m3 = induced_map_on_homology(&f, 1, p(3)).unwrap();
        assert_eq!(m3.rank(), 1);
    }

    #[test]
    fn restriction_examples() {
        let tri = k(&[&[0, 1, 2]]);
        let bd = tri.skeleton(1);
        let inc = SimplicialMap::inclusion(&bd, tri.clone()).unwrap();
        let r = restriction_classification(&inc, 1, p(2)).unwrap();
        assert_eq!(r.classification, Classification::Epi);
        assert_eq!(r.cohomology_classification(), Classification::Mono);

        let c3 = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        let edge = crate::complex::Subcomplex::from_parent_simplices(&c3, vec![Simplex::new(vec![0, 1]).unwrap()]).unwrap();
        let inc = SimplicialMap::inclusion(&edge, c3.clone()).unwrap();
        assert_eq!(restriction_classification(&inc, 1, p(2)).unwrap().classification, Classification::Mono);

        let fold = SimplicialMap::new(c3.clone(), k(&[&[0, 1]]), vec![0, 1, 1]);
        assert!(fold.is_err() || !fold.unwrap().is_inclusion());
    }

    #[test]
    fn non_cycle_coordinates_error() {
        let c3 = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        let h = homology_basis(&c3, 1, p(2), false);
        assert!(matches!(h.coordinates(&[1, 0, 0]), Err(Error::NotInSpan)));
        assert_eq!(h.coordinates(&[1, 1, 1]).unwrap(), vec![1]);
    }
}
