//! Finite abstract simplicial complexes.
//!
//! Vertices are dense indices `0..n`; index order is the canonical total
//! order of a complex and every downstream choice (spanning trees, pivots,
//! cylinder orderings) keys off it. Simplices are stored per dimension in
//! lexicographic order.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{validation, Result};

/// Vertex index within one complex.
pub type VertexId = usize;

/// A simplex as a strictly increasing list of vertex indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts the vertices; rejects empty lists and repeated vertices.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(validation("empty simplex"));
        }
        vertices.sort_unstable();
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(validation(format!("repeated vertex in simplex {vertices:?}")));
        }
        Ok(Simplex(vertices))
    }

    /// Sorts and deduplicates: the vertex set of an image under a map.
    pub fn collapse(mut vertices: Vec<VertexId>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Simplex(vertices)
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertex(v: VertexId) -> Self {
        Simplex(vec![v])
    }

    #[inline]
    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|v| other.contains(*v))
    }

    /// Codimension-one faces; face `i` omits the `i`-th vertex.
    pub fn boundary_faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (0..if n > 1 { n } else { 0 }).map(move |i| {
            let mut f = self.0.clone();
            f.remove(i);
            Simplex(f)
        })
    }

    /// All nonempty faces, including the simplex itself.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.0.len();
        (1u64..(1u64 << n)).map(move |mask| {
            Simplex((0..n).filter(|i| mask >> i & 1 == 1).map(|i| self.0[i]).collect())
        })
    }

    /// Smallest simplex containing both (vertex union).
    pub fn join(&self, other: &Simplex) -> Simplex {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Simplex::collapse(v)
    }

    pub fn map(&self, f: impl Fn(VertexId) -> VertexId) -> Simplex {
        Simplex::collapse(self.0.iter().map(|&v| f(v)).collect())
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite simplicial complex closed under faces.
#[derive(Clone)]
pub struct SimplicialComplex {
    name: String,
    labels: Option<Vec<String>>,
    num_vertices: usize,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.labels == other.labels
            && self.num_vertices == other.num_vertices
            && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplicialComplex")
            .field("name", &self.name)
            .field("f_vector", &self.f_vector())
            .finish()
    }
}

impl SimplicialComplex {
    /// The empty complex on zero vertices.
    pub fn empty() -> Self {
        SimplicialComplex {
            name: String::new(),
            labels: None,
            num_vertices: 0,
            simplices: Vec::new(),
            index: Vec::new(),
        }
    }

    /// Smallest complex containing each listed simplex. Vertices are the
    /// distinct integers appearing, in increasing order; labels are their
    /// decimal forms unless the integers are exactly `0..n`.
    pub fn closure_from_maximal(maximal: &[Vec<usize>]) -> Result<Self> {
        let mut ids: Vec<usize> = maximal.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        let pos: HashMap<usize, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let gens = maximal
            .iter()
            .map(|s| Simplex::new(s.iter().map(|v| pos[v]).collect()))
            .collect::<Result<Vec<_>>>()?;
        let mut k = Self::from_simplices(ids.len(), gens)?;
        if ids.iter().enumerate().any(|(i, &v)| i != v) {
            k.labels = Some(ids.iter().map(|v| v.to_string()).collect());
        }
        Ok(k)
    }

    /// Complex with explicit vertex labels; simplices index into `labels`.
    pub fn from_labeled(name: &str, labels: Vec<String>, maximal: &[Vec<usize>]) -> Result<Self> {
        let gens = maximal.iter().map(|s| Simplex::new(s.clone())).collect::<Result<Vec<_>>>()?;
        let mut k = Self::from_simplices(labels.len(), gens)?;
        k.labels = Some(labels);
        k.name = name.to_string();
        Ok(k)
    }

    /// Closure of the given simplices on vertices `0..num_vertices`. Every
    /// vertex must occur in some simplex.
    pub fn from_simplices(num_vertices: usize, gens: impl IntoIterator<Item = Simplex>) -> Result<Self> {
        let mut by_dim: Vec<HashSet<Simplex>> = Vec::new();
        for s in gens {
            if let Some(&v) = s.vertices().last() {
                if v >= num_vertices {
                    return Err(validation(format!("vertex {v} out of range 0..{num_vertices}")));
                }
            }
            if by_dim.len() <= s.dim() || !by_dim[s.dim()].contains(&s) {
                for f in s.faces() {
                    let d = f.dim();
                    if by_dim.len() <= d {
                        by_dim.resize_with(d + 1, HashSet::new);
                    }
                    by_dim[d].insert(f);
                }
            }
        }
        let simplices: Vec<Vec<Simplex>> = by_dim
            .into_iter()
            .map(|set| {
                let mut v: Vec<Simplex> = set.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect();
        let used = simplices.first().map_or(0, |v| v.len());
        if used != num_vertices {
            return Err(validation(format!(
                "{} of {} vertices belong to no simplex",
                num_vertices - used,
                num_vertices
            )));
        }
        Ok(Self::from_sorted_parts(num_vertices, simplices))
    }

    fn from_sorted_parts(num_vertices: usize, simplices: Vec<Vec<Simplex>>) -> Self {
        let index = simplices
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex { name: String::new(), labels: None, num_vertices, simplices, index }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.num_vertices {
            return Err(validation("label count does not match vertex count"));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: VertexId) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    #[inline]
    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn is_empty(&self) -> bool {
        self.num_vertices == 0
    }

    /// Maximal simplex dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    pub fn simplices(&self, k: usize) -> &[Simplex] {
        self.simplices.get(k).map_or(&[], |v| v.as_slice())
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices(k).len()
    }

    /// Simplex counts by dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    pub fn total_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter().flatten()
    }

    pub fn index_of(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s.dim())?.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index_of(s).is_some()
    }

    /// Simplices that are not a proper face of another simplex, ordered by
    /// dimension then lexicographically.
    pub fn maximal_simplices(&self) -> Vec<Simplex> {
        let mut covered: HashSet<&Simplex> = HashSet::new();
        for layer in self.simplices.iter().skip(1) {
            for s in layer {
                for f in s.boundary_faces() {
                    if let Some(i) = self.index_of(&f) {
                        covered.insert(&self.simplices[f.dim()][i]);
                    }
                }
            }
        }
        self.iter().filter(|s| !covered.contains(s)).cloned().collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(k, v)| if k % 2 == 0 { v.len() as i64 } else { -(v.len() as i64) })
            .sum()
    }

    /// Component count and a label per vertex. Labels are numbered in order
    /// of each component's least vertex.
    pub fn connected_components(&self) -> (usize, Vec<usize>) {
        let mut dsu = crate::util::Dsu::new(self.num_vertices);
        for e in self.simplices(1) {
            dsu.union(e.vertices()[0], e.vertices()[1]);
        }
        dsu.labels()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().0 == 1
    }

    /// Subcomplex of simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Subcomplex {
        Subcomplex::from_parent_simplices(
            self,
            self.simplices.iter().take(k + 1).flatten().cloned().collect(),
        )
        .expect("skeleton of a valid complex is valid")
    }

    /// Asserts face closure. Always true for values built through this API.
    /// Same vertex count and simplices, ignoring name and labels.
    pub fn same_simplices(&self, other: &SimplicialComplex) -> bool {
        self.num_vertices == other.num_vertices && self.simplices == other.simplices
    }

    pub fn check_closed(&self) -> Result<()> {
        for s in self.iter() {
            for f in s.boundary_faces() {
                if !self.contains(&f) {
                    return Err(validation(format!("face {f:?} of {s:?} missing")));
                }
            }
        }
        Ok(())
    }
}

/// A subcomplex realized as its own complex plus the vertex embedding into
/// the parent. Vertex order is the order induced from the parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subcomplex {
    pub complex: SimplicialComplex,
    pub embedding: Vec<VertexId>,
}

impl Subcomplex {
    /// Closure of the given parent simplices, which must all lie in `parent`.
    pub fn from_parent_simplices(parent: &SimplicialComplex, simplices: Vec<Simplex>) -> Result<Self> {
        let mut verts: Vec<VertexId> = simplices.iter().flat_map(|s| s.vertices().iter().copied()).collect();
        verts.sort_unstable();
        verts.dedup();
        let mut local = vec![usize::MAX; parent.num_vertices()];
        for (i, &v) in verts.iter().enumerate() {
            local[v] = i;
        }
        for s in &simplices {
            if !parent.contains(s) {
                return Err(validation(format!("{s:?} is not a simplex of the parent")));
            }
        }
        let gens = simplices.iter().map(|s| Simplex::from_sorted(s.vertices().iter().map(|&v| local[v]).collect()));
        let mut complex = SimplicialComplex::from_simplices(verts.len(), gens)?;
        if let Some(l) = parent.labels() {
            complex.labels = Some(verts.iter().map(|&v| l[v].clone()).collect());
        }
        Ok(Subcomplex { complex, embedding: verts })
    }

    /// The parent simplex corresponding to a local simplex.
    pub fn to_parent(&self, s: &Simplex) -> Simplex {
        Simplex::from_sorted(s.vertices().iter().map(|&v| self.embedding[v]).collect())
    }

    /// Local index of a parent vertex, if present.
    pub fn local_vertex(&self, v: VertexId) -> Option<VertexId> {
        self.embedding.binary_search(&v).ok()
    }

    /// Parent simplices of this subcomplex.
    pub fn parent_simplices(&self) -> impl Iterator<Item = Simplex> + '_ {
        self.complex.iter().map(|s| self.to_parent(s))
    }
}
