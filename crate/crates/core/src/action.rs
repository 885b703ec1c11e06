//! Simplicial actions of elementary abelian groups and their orbit complexes.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::{validation, Error, Result};
use crate::map::SimplicialMap;
use crate::util::Dsu;

/// An action of `(Z_order)^m` on a complex given by `m` commuting vertex
/// permutations of order dividing `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupAction {
    complex: Arc<SimplicialComplex>,
    order: u32,
    generators: Vec<Vec<VertexId>>,
}

impl GroupAction {
    /// Validates that each generator is a simplicial automorphism with
    /// `g^order = id` and that generators pairwise commute.
    pub fn new(complex: Arc<SimplicialComplex>, order: u32, generators: Vec<Vec<VertexId>>) -> Result<Self> {
        let a = GroupAction { complex, order, generators };
        a.validate()?;
        Ok(a)
    }

    pub(crate) fn new_unchecked(complex: Arc<SimplicialComplex>, order: u32, generators: Vec<Vec<VertexId>>) -> Self {
        GroupAction { complex, order, generators }
    }

    pub fn trivial(complex: Arc<SimplicialComplex>, order: u32) -> Self {
        GroupAction { complex, order, generators: Vec::new() }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn generators(&self) -> &[Vec<VertexId>] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.complex.num_vertices();
        for (gi, g) in self.generators.iter().enumerate() {
            if g.len() != n {
                return Err(validation(format!("generator {gi} has {} entries for {n} vertices", g.len())));
            }
            let mut seen = vec![false; n];
            for &x in g {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(validation(format!("generator {gi} is not a permutation")));
                }
            }
            for s in self.complex.iter() {
                if !self.complex.contains(&s.map(|v| g[v])) {
                    return Err(validation(format!("generator {gi} does not map {s:?} to a simplex")));
                }
            }
            let mut power: Vec<VertexId> = (0..n).collect();
            for _ in 0..self.order {
                power = power.iter().map(|&v| g[v]).collect();
            }
            if power.iter().enumerate().any(|(i, &v)| i != v) {
                return Err(validation(format!("generator {gi} does not have order dividing {}", self.order)));
            }
        }
        for (i, g) in self.generators.iter().enumerate() {
            for (j, h) in self.generators.iter().enumerate().skip(i + 1) {
                if (0..n).any(|v| g[h[v]] != h[g[v]]) {
                    return Err(validation(format!("generators {i} and {j} do not commute")));
                }
            }
        }
        Ok(())
    }

    /// Vertex orbits: representative (least vertex) per vertex.
    pub fn vertex_orbits(&self) -> Vec<VertexId> {
        let n = self.complex.num_vertices();
        let mut dsu = Dsu::new(n);
        for g in &self.generators {
            for v in 0..n {
                dsu.union(v, g[v]);
            }
        }
        (0..n).map(|v| dsu.find(v)).collect()
    }

    /// Whether every vertex orbit has as many elements as the group, i.e. no
    /// non-identity element fixes a vertex.
    pub fn is_free(&self) -> bool {
        let Some(size) = (self.order as usize).checked_pow(self.generators.len() as u32) else {
            return false;
        };
        let reps = self.vertex_orbits();
        let mut count = vec![0usize; reps.len()];
        for &r in &reps {
            count[r] += 1;
        }
        reps.iter().all(|&r| count[r] == size)
    }

    /// Vertices fixed by every generator.
    pub fn fixed_vertices(&self) -> Vec<VertexId> {
        (0..self.complex.num_vertices())
            .filter(|&v| self.generators.iter().all(|g| g[v] == v))
            .collect()
    }

    /// Restricts to an invariant subcomplex given by its vertex embedding.
    pub fn restrict(&self, sub: Arc<SimplicialComplex>, embedding: &[VertexId]) -> Result<GroupAction> {
        let mut local = HashMap::with_capacity(embedding.len());
        for (i, &v) in embedding.iter().enumerate() {
            local.insert(v, i);
        }
        let gens = self
            .generators
            .iter()
            .map(|g| {
                embedding
                    .iter()
                    .map(|&v| local.get(&g[v]).copied().ok_or_else(|| validation("subcomplex is not invariant")))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        GroupAction::new(sub, self.order, gens)
    }
}

/// Orbit complex of an action together with the orbit map.
///
/// Orbits are numbered by their least vertex. The quotient must be a
/// simplicial complex in which each simplex is the image of exactly one
/// orbit of simplices; otherwise the caller is told to subdivide first.
pub fn quotient_by_action(a: &GroupAction) -> Result<(SimplicialComplex, SimplicialMap)> {
    let k = a.complex();
    let rep = a.vertex_orbits();
    let mut reps: Vec<VertexId> = rep.clone();
    reps.sort_unstable();
    reps.dedup();
    let orbit_index: HashMap<VertexId, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    let vmap: Vec<usize> = rep.iter().map(|r| orbit_index[r]).collect();

    let mut images: Vec<Simplex> = Vec::new();
    for s in k.iter() {
        let img = s.map(|v| vmap[v]);
        if img.dim() != s.dim() {
            return Err(Error::DegenerateQuotient(format!("simplex {s:?} has two vertices in one orbit")));
        }
        images.push(img);
    }

    // each quotient simplex must come from a single orbit of simplices
    for d in 0..=k.dim().unwrap_or(0) {
        let layer = k.simplices(d);
        if layer.is_empty() {
            continue;
        }
        let mut dsu = Dsu::new(layer.len());
        for g in a.generators() {
            for (i, s) in layer.iter().enumerate() {
                let j = k.index_of(&s.map(|v| g[v])).expect("generators are simplicial");
                dsu.union(i, j);
            }
        }
        let orbit_count = dsu.labels().0;
        let distinct: HashSet<Simplex> = layer.iter().map(|s| s.map(|v| vmap[v])).collect();
        if distinct.len() != orbit_count {
            return Err(Error::DegenerateQuotient(format!(
                "{orbit_count} orbits of {d}-simplices collapse onto {} simplices",
                distinct.len()
            )));
        }
    }

    let mut q = SimplicialComplex::from_simplices(reps.len(), images)?;
    q = q.with_labels(reps.iter().map(|&r| k.label(r)).collect())?;
    let q = Arc::new(q);
    let orbit_map = SimplicialMap::new(k.clone(), q.clone(), vmap)?;
    Ok(((*q).clone(), orbit_map))
}

/// Checks that `f` is, up to renaming the orbits, the orbit map of `a` onto
/// its codomain: `f` identifies exactly the vertices in a common orbit and
/// carries the simplices of the orbit complex onto those of the codomain.
/// The error describes the first discrepancy.
pub fn check_orbit_map(a: &GroupAction, f: &SimplicialMap) -> std::result::Result<(), String> {
    if !Arc::ptr_eq(a.complex(), f.domain()) && !a.complex().same_simplices(f.domain()) {
        return Err("map and action live on different complexes".into());
    }
    let (q, orbit) = quotient_by_action(a).map_err(|e| e.to_string())?;
    let mut rename: Vec<Option<VertexId>> = vec![None; q.num_vertices()];
    for v in 0..f.domain().num_vertices() {
        let o = orbit.apply(v);
        match rename[o] {
            None => rename[o] = Some(f.apply(v)),
            Some(w) if w != f.apply(v) => {
                return Err(format!("vertex {v} is in the orbit of a vertex with a different image"));
            }
            Some(_) => {}
        }
    }
    let rename: Vec<VertexId> = rename.into_iter().map(|w| w.expect("orbits are nonempty")).collect();
    let mut seen = vec![false; f.codomain().num_vertices()];
    for &w in &rename {
        if std::mem::replace(&mut seen[w], true) {
            return Err(format!("two orbits map to vertex {w}"));
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err("the map is not onto the vertices".into());
    }
    let images: HashSet<Simplex> = q.iter().map(|s| s.map(|o| rename[o])).collect();
    if images.len() != f.codomain().total_simplices() || f.codomain().iter().any(|s| !images.contains(s)) {
        return Err("orbit complex differs from the codomain".into());
    }
    Ok(())
}
