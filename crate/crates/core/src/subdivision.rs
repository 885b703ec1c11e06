//! Subdivisions with carrier bookkeeping.
//!
//! A [`Subdivision`] records, for each vertex of the fine complex, its
//! carrier: the smallest simplex of the coarse complex containing it. The
//! carrier of a fine simplex is the union of its vertex carriers, and a fine
//! simplex lies in `|S|` for a coarse subcomplex `S` iff its carrier is in
//! `S`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::complex::{Simplex, SimplicialComplex, Subcomplex, VertexId};
use crate::error::{validation, Result};
use crate::map::SimplicialMap;

#[derive(Clone, Debug, PartialEq)]
pub struct Subdivision {
    pub fine: Arc<SimplicialComplex>,
    pub coarse: Arc<SimplicialComplex>,
    pub carrier: Vec<Simplex>,
}

impl Subdivision {
    pub fn identity(k: Arc<SimplicialComplex>) -> Self {
        let carrier = (0..k.num_vertices()).map(Simplex::vertex).collect();
        Subdivision { fine: k.clone(), coarse: k, carrier }
    }

    pub fn carrier_of(&self, s: &Simplex) -> Simplex {
        let mut v: Vec<VertexId> = Vec::new();
        for &w in s.vertices() {
            v.extend_from_slice(self.carrier[w].vertices());
        }
        Simplex::collapse(v)
    }

    /// Fine subcomplex lying over the coarse simplices accepted by `pred`
    /// (which must be closed under faces).
    pub fn over(&self, pred: impl Fn(&Simplex) -> bool) -> Subcomplex {
        let keep = self.fine.iter().filter(|s| pred(&self.carrier_of(s))).cloned().collect();
        Subcomplex::from_parent_simplices(&self.fine, keep).expect("carrier preimage is a subcomplex")
    }

    /// Fine subcomplex subdividing the closed coarse simplex `sigma`.
    pub fn over_simplex(&self, sigma: &Simplex) -> Subcomplex {
        self.over(|c| c.is_face_of(sigma))
    }

    /// Fine subcomplex subdividing the boundary of `sigma`.
    pub fn over_boundary(&self, sigma: &Simplex) -> Subcomplex {
        self.over(|c| c.is_face_of(sigma) && c != sigma)
    }

    /// Carriers relative to the coarse complex of `coarser`, where
    /// `self.coarse` is `coarser.fine`.
    pub fn compose(&self, coarser: &Subdivision) -> Result<Subdivision> {
        if *self.coarse != *coarser.fine {
            return Err(validation("subdivisions are not composable"));
        }
        let carrier = self.carrier.iter().map(|c| coarser.carrier_of(c)).collect();
        Ok(Subdivision { fine: self.fine.clone(), coarse: coarser.coarse.clone(), carrier })
    }

    /// Checks that every fine simplex has a carrier that is a coarse simplex
    /// of dimension at least its own, and that the Euler characteristic of
    /// the fine complex over each coarse simplex is 1.
    pub fn validate(&self) -> Result<()> {
        if self.carrier.len() != self.fine.num_vertices() {
            return Err(validation("carrier table has the wrong length"));
        }
        for s in self.fine.iter() {
            let c = self.carrier_of(s);
            if !self.coarse.contains(&c) || c.dim() < s.dim() {
                return Err(validation(format!("fine simplex {s:?} has invalid carrier {c:?}")));
            }
        }
        for sigma in self.coarse.iter() {
            if self.over_simplex(sigma).complex.euler_characteristic() != 1 {
                return Err(validation(format!("fine complex over {sigma:?} is not a cell")));
            }
        }
        Ok(())
    }

    /// Pulls this subdivision of `Y` back along a nondegenerate simplicial map
    /// `q: X -> Y`, giving a subdivision `X'` of `X` and the induced
    /// nondegenerate map `X' -> self.fine`.
    ///
    /// Vertices of `X'` are pairs `(sigma, w)` with `q(sigma)` equal to the
    /// carrier of `w`, in lexicographic order of (index of sigma in `X`, w).
    pub fn pull_back(&self, q: &SimplicialMap) -> Result<PulledBack> {
        if !q.is_nondegenerate() {
            return Err(validation("subdivisions pull back only along nondegenerate maps"));
        }
        if **q.codomain() != *self.coarse {
            return Err(validation("map codomain is not the coarse complex of the subdivision"));
        }
        let x = q.domain();
        let mut by_carrier: HashMap<&Simplex, Vec<VertexId>> = HashMap::new();
        for (w, c) in self.carrier.iter().enumerate() {
            by_carrier.entry(c).or_default().push(w);
        }
        let mut fine_by_carrier: HashMap<Simplex, Vec<&Simplex>> = HashMap::new();
        for s in self.fine.iter() {
            fine_by_carrier.entry(self.carrier_of(s)).or_default().push(s);
        }

        let mut vertex_of: HashMap<(Simplex, VertexId), VertexId> = HashMap::new();
        let mut carrier = Vec::new();
        let mut to_fine = Vec::new();
        for sigma in x.iter() {
            let img = q.image(sigma);
            if let Some(ws) = by_carrier.get(&img) {
                for &w in ws {
                    vertex_of.insert((sigma.clone(), w), carrier.len());
                    carrier.push(sigma.clone());
                    to_fine.push(w);
                }
            }
        }

        let mut gens = Vec::new();
        for sigma in x.maximal_simplices() {
            let img = q.image(&sigma);
            // q restricted to sigma is a bijection onto img
            let back: HashMap<VertexId, VertexId> =
                sigma.vertices().iter().map(|&v| (q.apply(v), v)).collect();
            for tau in fine_by_carrier.get(&img).into_iter().flatten() {
                let lifted: Vec<VertexId> = tau
                    .vertices()
                    .iter()
                    .map(|&w| {
                        let face = Simplex::collapse(self.carrier[w].vertices().iter().map(|c| back[c]).collect());
                        vertex_of[&(face, w)]
                    })
                    .collect();
                gens.push(Simplex::collapse(lifted));
            }
        }
        let fine = Arc::new(SimplicialComplex::from_simplices(carrier.len(), gens)?);
        let map = SimplicialMap::new(fine.clone(), self.fine.clone(), to_fine)?;
        Ok(PulledBack { subdivision: Subdivision { fine, coarse: x.clone(), carrier }, map, vertex_of })
    }
}

/// Result of [`Subdivision::pull_back`].
#[derive(Clone, Debug)]
pub struct PulledBack {
    pub subdivision: Subdivision,
    /// The induced map from the pulled-back complex to the fine complex.
    pub map: SimplicialMap,
    vertex_of: HashMap<(Simplex, VertexId), VertexId>,
}

impl PulledBack {
    /// Transports a vertex permutation `g` of `X` commuting with `q` to the
    /// pulled-back complex: `(sigma, w) -> (g sigma, w)`.
    pub fn transport(&self, g: &[VertexId]) -> Result<Vec<VertexId>> {
        let sub = &self.subdivision;
        (0..sub.fine.num_vertices())
            .map(|v| {
                let moved = sub.carrier[v].map(|x| g[x]);
                self.vertex_of
                    .get(&(moved, self.map.apply(v)))
                    .copied()
                    .ok_or_else(|| validation("permutation does not commute with the map"))
            })
            .collect()
    }
}

/// Barycentric subdivision. Vertices are the simplices of `k` in dimension
/// then lexicographic order; simplices are chains of faces.
pub fn barycentric_subdivision(k: &Arc<SimplicialComplex>) -> Subdivision {
    let order: Vec<&Simplex> = k.iter().collect();
    let index: HashMap<&Simplex, VertexId> = order.iter().enumerate().map(|(i, s)| (*s, i)).collect();
    let mut gens = Vec::new();
    for sigma in k.maximal_simplices() {
        let verts = sigma.vertices();
        for perm in permutations(verts.len()) {
            let mut chain = Vec::with_capacity(verts.len());
            let mut acc = Vec::with_capacity(verts.len());
            for &i in &perm {
                acc.push(verts[i]);
                chain.push(index[&Simplex::collapse(acc.clone())]);
            }
            gens.push(Simplex::collapse(chain));
        }
    }
    let fine = SimplicialComplex::from_simplices(order.len(), gens).expect("barycentric subdivision is valid");
    Subdivision {
        fine: Arc::new(fine.with_name(format!("sd({})", k.name()))),
        coarse: k.clone(),
        carrier: order.into_iter().cloned().collect(),
    }
}

/// Star subdivision at `sigma`: every simplex containing `sigma` is replaced
/// by the cone from a new barycenter vertex (appended last) over its faces
/// not containing `sigma`. Starring at a vertex changes nothing.
pub fn star_subdivision(k: &Arc<SimplicialComplex>, sigma: &Simplex) -> Result<Subdivision> {
    if !k.contains(sigma) {
        return Err(validation(format!("{sigma:?} is not a simplex of the complex")));
    }
    if sigma.dim() == 0 {
        return Ok(Subdivision::identity(k.clone()));
    }
    let b = k.num_vertices();
    let mut gens = Vec::new();
    for tau in k.maximal_simplices() {
        if !sigma.is_face_of(&tau) {
            gens.push(tau);
            continue;
        }
        for &v in sigma.vertices() {
            let mut rest: Vec<VertexId> = tau.vertices().iter().copied().filter(|&x| x != v).collect();
            rest.push(b);
            gens.push(Simplex::collapse(rest));
        }
    }
    let fine = SimplicialComplex::from_simplices(b + 1, gens)?;
    let mut carrier: Vec<Simplex> = (0..b).map(Simplex::vertex).collect();
    carrier.push(sigma.clone());
    Ok(Subdivision { fine: Arc::new(fine), coarse: k.clone(), carrier })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(m: &[&[usize]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::closure_from_maximal(&m.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap())
    }

    #[test]
    fn barycentric_counts() {
        let sd1 = barycentric_subdivision(&k(&[&[0, 1]]));
        assert_eq!(sd1.fine.f_vector(), vec![3, 2]);
        let sd2 = barycentric_subdivision(&k(&[&[0, 1, 2]]));
        assert_eq!(sd2.fine.f_vector(), vec![7, 12, 6]);
        sd2.validate().unwrap();
    }

    #[test]
    fn star_counts() {
        let t = k(&[&[0, 1, 2]]);
        let top = star_subdivision(&t, &Simplex::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert_eq!(top.fine.num_vertices(), 4);
        assert_eq!(top.fine.count(2), 3);
        let edge = star_subdivision(&t, &Simplex::new(vec![0, 1]).unwrap()).unwrap();
        assert_eq!(edge.fine.num_vertices(), 4);
        assert_eq!(edge.fine.count(2), 2);
        edge.validate().unwrap();
        assert!(star_subdivision(&t, &Simplex::new(vec![0, 3]).unwrap_or(Simplex::vertex(9))).is_err());
    }

    #[test]
    fn subdivisions_preserve_euler_characteristic() {
        let torus: Vec<Vec<usize>> = (0..7)
            .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
            .collect();
        let t = Arc::new(SimplicialComplex::closure_from_maximal(&torus).unwrap());
        assert_eq!(barycentric_subdivision(&t).fine.euler_characteristic(), 0);
        for s in t.iter().take(30) {
            assert_eq!(star_subdivision(&t, s).unwrap().fine.euler_characteristic(), 0);
        }
    }

    #[test]
    fn over_simplex_and_boundary() {
        let sd = barycentric_subdivision(&k(&[&[0, 1, 2]]));
        let tri = Simplex::new(vec![0, 1, 2]).unwrap();
        assert_eq!(sd.over_simplex(&tri).complex.f_vector(), vec![7, 12, 6]);
        assert_eq!(sd.over_boundary(&tri).complex.f_vector(), vec![6, 6]);
    }

    #[test]
    fn pull_back_along_a_double_cover() {
        // hexagon wrapping twice around a triangle; subdivide the triangle barycentrically
        let hex = Arc::new(
            SimplicialComplex::closure_from_maximal(&(0..6).map(|i| vec![i, (i + 1) % 6]).collect::<Vec<_>>()).unwrap(),
        );
        let tri = k(&[&[0, 1], &[1, 2], &[0, 2]]);
        let q = SimplicialMap::new(hex.clone(), tri.clone(), (0..6).map(|i| i % 3).collect()).unwrap();
        let sd = barycentric_subdivision(&tri);
        let pb = sd.pull_back(&q).unwrap();
        assert_eq!(pb.subdivision.fine.f_vector(), vec![12, 12]);
        assert!(pb.map.is_nondegenerate());
        let rot3: Vec<usize> = (0..6).map(|i| (i + 3) % 6).collect();
        let moved = pb.transport(&rot3).unwrap();
        assert!((0..12).all(|v| pb.map.apply(moved[v]) == pb.map.apply(v)));
    }
}
