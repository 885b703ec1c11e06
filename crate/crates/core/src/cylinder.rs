//! Simplicial mapping cylinders and mapping cones.
//!
//! The cylinder of `f: X -> Y` has the vertices of `Y` followed by those of
//! `X`, the latter sorted by a key. For every simplex `v0 < ... < vk` of `X`
//! (in key order) it contains `{f(v0), ..., f(vi)} ∪ {vi, ..., vk}` for each
//! `i`, together with both ends.

use std::sync::Arc;

use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::Result;
use crate::map::SimplicialMap;
use crate::util::{invert_permutation, ranking_by_key};

#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: Arc<SimplicialComplex>,
    pub domain_inclusion: SimplicialMap,
    pub codomain_inclusion: SimplicialMap,
    pub retraction: SimplicialMap,
}

#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Arc<SimplicialComplex>,
    pub codomain_inclusion: SimplicialMap,
    /// Position of each domain vertex in the cone.
    pub domain_vertex: Vec<VertexId>,
    pub apex: VertexId,
}

/// Mapping cylinder with domain vertices ordered by `(f(v), v)`.
pub fn mapping_cylinder(f: &SimplicialMap) -> Result<Cylinder> {
    mapping_cylinder_by_key(f, |v| (f.apply(v), v))
}

/// Mapping cylinder with domain vertices ordered by `key`, which must be
/// injective.
pub fn mapping_cylinder_by_key<K: Ord>(f: &SimplicialMap, key: impl Fn(VertexId) -> K) -> Result<Cylinder> {
    let (gens, domain_vertex) = cylinder_simplices(f, key);
    let x = f.domain();
    let y = f.codomain();
    let ny = y.num_vertices();
    let n = ny + x.num_vertices();
    let complex = Arc::new(
        SimplicialComplex::from_simplices(n, gens)?.with_name(format!("cyl({} -> {})", x.name(), y.name())),
    );
    let mut retract: Vec<VertexId> = (0..ny).collect();
    retract.extend(invert_permutation(&domain_vertex.iter().map(|&c| c - ny).collect::<Vec<_>>()).iter().map(|&v| f.apply(v)));
    Ok(Cylinder {
        domain_inclusion: SimplicialMap::new(x.clone(), complex.clone(), domain_vertex)?,
        codomain_inclusion: SimplicialMap::new(y.clone(), complex.clone(), (0..ny).collect())?,
        retraction: SimplicialMap::new(complex.clone(), y.clone(), retract)?,
        complex,
    })
}

/// Maximal cylinder simplices and the cylinder position of each domain vertex.
pub(crate) fn cylinder_simplices<K: Ord>(f: &SimplicialMap, key: impl Fn(VertexId) -> K) -> (Vec<Simplex>, Vec<VertexId>) {
    let x = f.domain();
    let y = f.codomain();
    let ny = y.num_vertices();
    let rank = ranking_by_key(x.num_vertices(), key);
    let domain_vertex: Vec<VertexId> = rank.iter().map(|&r| ny + r).collect();
    let mut gens: Vec<Simplex> = y.maximal_simplices();
    for s in x.maximal_simplices() {
        let mut ordered: Vec<VertexId> = s.vertices().to_vec();
        ordered.sort_by_key(|&v| rank[v]);
        gens.push(s.map(|v| domain_vertex[v]));
        for i in 0..ordered.len() {
            let mut verts: Vec<VertexId> = ordered[..=i].iter().map(|&v| f.apply(v)).collect();
            verts.extend(ordered[i..].iter().map(|&v| domain_vertex[v]));
            gens.push(Simplex::collapse(verts));
        }
    }
    (gens, domain_vertex)
}

/// Mapping cone: the cylinder with its domain end coned off by an apex
/// appended as the last vertex.
pub fn mapping_cone(f: &SimplicialMap) -> Result<Cone> {
    mapping_cone_by_key(f, |v| (f.apply(v), v))
}

pub fn mapping_cone_by_key<K: Ord>(f: &SimplicialMap, key: impl Fn(VertexId) -> K) -> Result<Cone> {
    let (mut gens, domain_vertex) = cylinder_simplices(f, key);
    let x = f.domain();
    let y = f.codomain();
    let apex = y.num_vertices() + x.num_vertices();
    for s in x.maximal_simplices() {
        let mut v: Vec<VertexId> = s.vertices().iter().map(|&w| domain_vertex[w]).collect();
        v.push(apex);
        gens.push(Simplex::collapse(v));
    }
    let complex = Arc::new(
        SimplicialComplex::from_simplices(apex + 1, gens)?.with_name(format!("cone({} -> {})", x.name(), y.name())),
    );
    Ok(Cone {
        codomain_inclusion: SimplicialMap::new(y.clone(), complex.clone(), (0..y.num_vertices()).collect())?,
        domain_vertex,
        apex,
        complex,
    })
}
