//! Simplicial fiber products.
//!
//! Given `f: X -> Y` and `g: Z -> Y`, the vertices are the pairs `(x, z)`
//! with `f(x) = g(z)`, in lexicographic order. Order the vertices of `X` by
//! `(f(x), x)` and those of `Z` by `(g(z), z)`. For simplices `s` of `X` and
//! `t` of `Z` the product `s × t` is triangulated by the chains of the
//! product order (the staircase triangulation); the fiber product keeps the
//! chains all of whose vertices are compatible pairs.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::{validation, Result};
use crate::map::SimplicialMap;
use crate::util::ranking_by_key;

#[derive(Clone, Debug)]
pub struct FiberProduct {
    pub complex: Arc<SimplicialComplex>,
    pub pairs: Vec<(VertexId, VertexId)>,
    pub to_left: SimplicialMap,
    pub to_right: SimplicialMap,
    index: HashMap<(VertexId, VertexId), VertexId>,
}

impl FiberProduct {
    pub fn vertex(&self, x: VertexId, z: VertexId) -> Option<VertexId> {
        self.index.get(&(x, z)).copied()
    }

    /// Vertex permutation acting by `gx` on the left factor and `gz` on the
    /// right one. Both must commute with the maps to the common base.
    pub fn product_permutation(&self, gx: &[VertexId], gz: &[VertexId]) -> Result<Vec<VertexId>> {
        self.pairs
            .iter()
            .map(|&(x, z)| self.vertex(gx[x], gz[z]).ok_or_else(|| validation("permutation does not preserve fibers")))
            .collect()
    }
}

pub fn fiber_product(f: &SimplicialMap, g: &SimplicialMap) -> Result<FiberProduct> {
    if !Arc::ptr_eq(f.codomain(), g.codomain()) && !f.codomain().same_simplices(g.codomain()) {
        return Err(validation("maps have different codomains"));
    }
    let x = f.domain();
    let z = g.domain();
    let ny = f.codomain().num_vertices();

    let mut z_over: Vec<Vec<VertexId>> = vec![Vec::new(); ny];
    for v in 0..z.num_vertices() {
        z_over[g.apply(v)].push(v);
    }
    let mut pairs = Vec::new();
    for xv in 0..x.num_vertices() {
        for &zv in &z_over[f.apply(xv)] {
            pairs.push((xv, zv));
        }
    }
    let index: HashMap<(VertexId, VertexId), VertexId> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let rank_x = ranking_by_key(x.num_vertices(), |v| (f.apply(v), v));
    let rank_z = ranking_by_key(z.num_vertices(), |v| (g.apply(v), v));

    // maximal simplices of Z by the vertices of their images
    let z_max = z.maximal_simplices();
    let mut z_max_over: Vec<Vec<usize>> = vec![Vec::new(); ny];
    for (i, t) in z_max.iter().enumerate() {
        for &y in g.image(t).vertices() {
            z_max_over[y].push(i);
        }
    }

    let mut gens: Vec<Simplex> = Vec::new();
    let mut candidates: Vec<usize> = Vec::new();
    for s in x.maximal_simplices() {
        candidates.clear();
        for &y in f.image(&s).vertices() {
            candidates.extend_from_slice(&z_max_over[y]);
        }
        candidates.sort_unstable();
        candidates.dedup();
        let mut sv = s.vertices().to_vec();
        sv.sort_by_key(|&v| rank_x[v]);
        for &ti in &candidates {
            let mut tv = z_max[ti].vertices().to_vec();
            tv.sort_by_key(|&v| rank_z[v]);
            staircase_chains(&sv, &tv, |i, j| f.apply(sv[i]) == g.apply(tv[j]), |chain| {
                gens.push(Simplex::collapse(chain.iter().map(|&(i, j)| index[&(sv[i], tv[j])]).collect()));
            });
        }
    }

    let n = pairs.len();
    let complex = Arc::new(
        SimplicialComplex::from_simplices(n, gens)?.with_name(format!("{} x {}", x.name(), z.name())),
    );
    let to_left = SimplicialMap::new(complex.clone(), x.clone(), pairs.iter().map(|p| p.0).collect())?;
    let to_right = SimplicialMap::new(complex.clone(), z.clone(), pairs.iter().map(|p| p.1).collect())?;
    Ok(FiberProduct { complex, pairs, to_left, to_right, index })
}

/// Calls `emit` on every maximal chain of the grid `0..a × 0..b` (product
/// order) restricted to the cells accepted by `keep`.
fn staircase_chains(
    a: &[VertexId],
    b: &[VertexId],
    keep: impl Fn(usize, usize) -> bool,
    mut emit: impl FnMut(&[(usize, usize)]),
) {
    let cells: Vec<(usize, usize)> =
        (0..a.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).filter(|&(i, j)| keep(i, j)).collect();
    if cells.is_empty() {
        return;
    }
    let below = |p: (usize, usize), q: (usize, usize)| p != q && p.0 <= q.0 && p.1 <= q.1;
    // covering relation inside the kept cells
    let covers: Vec<Vec<usize>> = cells
        .iter()
        .map(|&p| {
            (0..cells.len())
                .filter(|&k| below(p, cells[k]) && !cells.iter().any(|&r| below(p, r) && below(r, cells[k])))
                .collect()
        })
        .collect();
    let minimal: Vec<usize> = (0..cells.len()).filter(|&k| !cells.iter().any(|&r| below(r, cells[k]))).collect();
    let mut chain: Vec<(usize, usize)> = Vec::new();
    fn walk(
        k: usize,
        cells: &[(usize, usize)],
        covers: &[Vec<usize>],
        chain: &mut Vec<(usize, usize)>,
        emit: &mut dyn FnMut(&[(usize, usize)]),
    ) {
        chain.push(cells[k]);
        if covers[k].is_empty() {
            emit(chain);
        }
        for &c in &covers[k] {
            walk(c, cells, covers, chain, emit);
        }
        chain.pop();
    }
    for m in minimal {
        walk(m, &cells, &covers, &mut chain, &mut emit);
    }
}
