use std::collections::HashSet;
use std::sync::Arc;

use crate::complex::{Simplex, SimplicialComplex, Subcomplex, VertexId};
use crate::error::{validation, Result};

/// A vertex assignment carrying every simplex of the domain onto a simplex
/// of the codomain.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    domain: Arc<SimplicialComplex>,
    codomain: Arc<SimplicialComplex>,
    vertex_map: Vec<VertexId>,
    nondegenerate: bool,
}

impl PartialEq for SimplicialMap {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_map == other.vertex_map
            && *self.domain == *other.domain
            && *self.codomain == *other.codomain
    }
}

impl SimplicialMap {
    pub fn new(
        domain: Arc<SimplicialComplex>,
        codomain: Arc<SimplicialComplex>,
        vertex_map: Vec<VertexId>,
    ) -> Result<Self> {
        if vertex_map.len() != domain.num_vertices() {
            return Err(validation(format!(
                "vertex map has {} entries for {} domain vertices",
                vertex_map.len(),
                domain.num_vertices()
            )));
        }
        if let Some(&bad) = vertex_map.iter().find(|&&w| w >= codomain.num_vertices()) {
            return Err(validation(format!("vertex image {bad} outside the codomain")));
        }
        let mut nondegenerate = true;
        for s in domain.iter() {
            let img = s.map(|v| vertex_map[v]);
            if img.dim() != s.dim() {
                nondegenerate = false;
            }
            if !codomain.contains(&img) {
                return Err(validation(format!("image {img:?} of simplex {s:?} is not a simplex")));
            }
        }
        Ok(SimplicialMap { domain, codomain, vertex_map, nondegenerate })
    }

    pub fn identity(k: Arc<SimplicialComplex>) -> Self {
        let n = k.num_vertices();
        SimplicialMap { domain: k.clone(), codomain: k, vertex_map: (0..n).collect(), nondegenerate: true }
    }

    /// Inclusion of a subcomplex into its parent.
    pub fn inclusion(sub: &Subcomplex, parent: Arc<SimplicialComplex>) -> Result<Self> {
        Self::new(Arc::new(sub.complex.clone()), parent, sub.embedding.clone())
    }

    pub fn domain(&self) -> &Arc<SimplicialComplex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SimplicialComplex> {
        &self.codomain
    }

    pub fn vertex_map(&self) -> &[VertexId] {
        &self.vertex_map
    }

    #[inline]
    pub fn apply(&self, v: VertexId) -> VertexId {
        self.vertex_map[v]
    }

    /// Vertex set of the image, duplicates collapsed.
    pub fn image(&self, s: &Simplex) -> Simplex {
        s.map(|v| self.vertex_map[v])
    }

    /// Injective on the vertices of every simplex.
    pub fn is_nondegenerate(&self) -> bool {
        self.nondegenerate
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.codomain.num_vertices()];
        self.vertex_map.iter().all(|&w| !std::mem::replace(&mut seen[w], true))
    }

    /// Surjective on simplices (hence on vertices).
    pub fn is_surjective(&self) -> bool {
        let images: HashSet<Simplex> = self.domain.iter().map(|s| self.image(s)).collect();
        self.codomain.iter().all(|s| images.contains(s))
    }

    /// Injective on vertices and simplices of the domain map to simplices:
    /// the map is the inclusion of a subcomplex up to relabeling.
    pub fn is_inclusion(&self) -> bool {
        self.is_injective()
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SimplicialMap) -> Result<SimplicialMap> {
        if *self.codomain != *g.domain {
            return Err(validation("maps are not composable"));
        }
        let vm = self.vertex_map.iter().map(|&v| g.vertex_map[v]).collect();
        SimplicialMap::new(self.domain.clone(), g.codomain.clone(), vm)
    }

    /// Largest subcomplex of the domain mapped into `target`, a subcomplex of
    /// the codomain.
    pub fn preimage_subcomplex(&self, target: &Subcomplex) -> Result<Subcomplex> {
        let allowed: HashSet<Simplex> = target.parent_simplices().collect();
        if let Some(bad) = allowed.iter().find(|s| !self.codomain.contains(s)) {
            return Err(validation(format!("{bad:?} is not a simplex of the codomain")));
        }
        Ok(self.preimage_where(|s| allowed.contains(s)))
    }

    /// Subcomplex of domain simplices whose image satisfies `pred`. `pred`
    /// must be closed under taking faces.
    pub(crate) fn preimage_where(&self, pred: impl Fn(&Simplex) -> bool) -> Subcomplex {
        let keep: Vec<Simplex> = self.domain.iter().filter(|s| pred(&self.image(s))).cloned().collect();
        Subcomplex::from_parent_simplices(&self.domain, keep).expect("preimage of a subcomplex is a subcomplex")
    }
}
