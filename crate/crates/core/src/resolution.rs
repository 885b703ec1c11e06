//! Equivariant resolutions: a complex `total` with an action of `(Z_p)^m`
//! whose orbit map onto a subdivision of the base restricts, over every base
//! simplex, to an `H_1`-isomorphism from the preimage of its boundary.
//!
//! The 1-skeleton is kept as is. Each simplex `D` of dimension at least 2 is
//! handled in canonical order: let `B` be the preimage of the already
//! subdivided boundary of `D` and `M -> B` its regular cover with group
//! `H_1(B; F_p)`. The mapping cone of `M -> B` is glued to `total` along
//! `B`, the existing generators act on `M` through their lifts, and the deck
//! generators of `M` are appended. Over `D` the orbit space is the mapping
//! cone of the identity of the boundary, i.e. a collar around the boundary
//! with the barycenter as cone point.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::action::{check_orbit_map, GroupAction};
use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::cover::{build_cover, lift_action};
use crate::cylinder::{mapping_cone, mapping_cone_by_key};
use crate::error::{validation, Error, Result};
use crate::homology::{homology_basis, induced_map_with, Classification};
use crate::linalg::{FpMatrix, Prime};
use crate::map::SimplicialMap;
use crate::report::{inclusion_h1, restriction_check, simplexwise_checks, CarrierIndex, Check, Target, VerificationReport};
use crate::subdivision::Subdivision;

/// Record of how one base simplex was resolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedSimplex {
    pub simplex: Simplex,
    /// Rank of the cover group for this simplex.
    pub l: usize,
    pub boundary_vertices: usize,
    pub cover_vertices: usize,
    /// Indices of the generators introduced here.
    pub generators: (usize, usize),
    /// Range of total vertices added for this simplex; the last is the apex.
    pub total_vertices: (usize, usize),
    /// Range of orbit-space vertices added; the last is the barycenter.
    pub orbit_vertices: (usize, usize),
}

#[derive(Clone, Debug)]
pub struct ResolutionStage {
    pub p: Prime,
    pub base: Arc<SimplicialComplex>,
    /// The orbit space as a subdivision of the base.
    pub subdivision: Subdivision,
    pub total: Arc<SimplicialComplex>,
    pub action: GroupAction,
    /// Orbit map onto `subdivision.fine`.
    pub orbit_map: SimplicialMap,
    pub provenance: Vec<ResolvedSimplex>,
    pub report: VerificationReport,
}

impl ResolutionStage {
    pub fn m(&self) -> usize {
        self.action.rank()
    }

    /// The unresolved stage: trivial action, identity orbit map.
    pub fn identity(base: &Arc<SimplicialComplex>, p: Prime) -> Self {
        let mut s = ResolutionStage {
            p,
            base: base.clone(),
            subdivision: Subdivision::identity(base.clone()),
            total: base.clone(),
            action: GroupAction::trivial(base.clone(), p.get()),
            orbit_map: SimplicialMap::identity(base.clone()),
            provenance: Vec::new(),
            report: VerificationReport::default(),
        };
        s.report = verify_resolution(&s);
        s
    }

    /// Assembles a stage from its parts and verifies it.
    pub fn from_parts(
        p: Prime,
        subdivision: Subdivision,
        action: GroupAction,
        orbit_map: SimplicialMap,
        provenance: Vec<ResolvedSimplex>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(orbit_map.domain(), action.complex()) && **orbit_map.domain() != **action.complex() {
            return Err(validation("orbit map and action are on different complexes"));
        }
        if **orbit_map.codomain() != *subdivision.fine {
            return Err(validation("orbit map does not land in the subdivision"));
        }
        let mut s = ResolutionStage {
            p,
            base: subdivision.coarse.clone(),
            total: action.complex().clone(),
            subdivision,
            action,
            orbit_map,
            provenance,
            report: VerificationReport::default(),
        };
        s.report = verify_resolution(&s);
        Ok(s)
    }
}

fn annotate(e: Error, delta: &Simplex) -> Error {
    match e {
        Error::Hypothesis(m) => Error::Hypothesis(format!("while resolving {delta:?}: {m}")),
        Error::Disconnected(n) => {
            Error::Hypothesis(format!("while resolving {delta:?}: boundary preimage has {n} components"))
        }
        other => other,
    }
}

/// Resolves a finite connected complex.
pub fn resolve(base: &Arc<SimplicialComplex>, p: Prime) -> Result<ResolutionStage> {
    if base.is_empty() {
        return Err(validation("cannot resolve the empty complex"));
    }
    let (components, _) = base.connected_components();
    if components != 1 {
        return Err(Error::Disconnected(components));
    }
    let skeleton = base.skeleton(1).complex;
    let mut total_gens: Vec<Simplex> = skeleton.maximal_simplices();
    let mut fine_gens: Vec<Simplex> = total_gens.clone();
    let mut total = Arc::new(skeleton.clone());
    let mut fine = Arc::new(skeleton);
    let mut carrier: Vec<Simplex> = (0..base.num_vertices()).map(Simplex::vertex).collect();
    let mut orbit: Vec<VertexId> = (0..base.num_vertices()).collect();
    let mut gens: Vec<Vec<VertexId>> = Vec::new();
    let mut provenance = Vec::new();

    for n in 2..=base.dim().unwrap_or(0) {
        for delta in base.simplices(n) {
            let sub = Subdivision { fine: fine.clone(), coarse: base.clone(), carrier: carrier.clone() };
            let proper = |c: &Simplex| c.is_face_of(delta) && c != delta;
            let fine_boundary = sub.over(proper);
            let b = {
                let keep: Vec<Simplex> =
                    total.iter().filter(|s| proper(&sub.carrier_of(&s.map(|v| orbit[v])))).cloned().collect();
                crate::complex::Subcomplex::from_parent_simplices(&total, keep)?
            };
            let b_complex = Arc::new(b.complex.clone());
            let cover = build_cover(&b_complex, p).map_err(|e| annotate(e, delta))?;
            let restricted: Vec<Vec<VertexId>> = gens
                .iter()
                .map(|g| b.embedding.iter().map(|&v| b.local_vertex(g[v]).expect("boundary preimage is invariant")).collect())
                .collect();
            let local_action = GroupAction::new_unchecked(b_complex.clone(), p.get(), restricted);
            debug_assert!(local_action.validate().is_ok());
            let lifted = lift_action(&cover, &local_action).map_err(|e| annotate(e, delta))?;

            // fine-boundary position of the image of each boundary vertex
            let fine_local = |bv: VertexId| fine_boundary.local_vertex(orbit[b.embedding[bv]]).expect("image in boundary");
            let proj = &cover.projection;
            let cone = mapping_cone_by_key(proj, |m| (fine_local(proj.apply(m)), m))?;

            let t = total.num_vertices();
            let nm = cover.total.num_vertices();
            let nb = b.complex.num_vertices();
            let apex = t + nm;
            let mut to_total = vec![0; cone.complex.num_vertices()];
            to_total[..nb].copy_from_slice(&b.embedding);
            for (m, &c) in cone.domain_vertex.iter().enumerate() {
                to_total[c] = t + m;
            }
            to_total[cone.apex] = apex;
            total_gens.extend(cone.complex.maximal_simplices().into_iter().map(|s| s.map(|v| to_total[v])));

            // orbit space over delta: cone of the identity on its boundary
            let f = fine.num_vertices();
            let nfb = fine_boundary.complex.num_vertices();
            let collar = mapping_cone(&SimplicialMap::identity(Arc::new(fine_boundary.complex.clone())))?;
            let to_fine = |c: VertexId| if c < nfb { fine_boundary.embedding[c] } else { f + (c - nfb) };
            fine_gens.extend(collar.complex.maximal_simplices().into_iter().map(|s| s.map(to_fine)));
            carrier.extend(std::iter::repeat_n(delta.clone(), nfb + 1));
            let barycenter = f + nfb;

            let cover_images: Vec<VertexId> = (0..nm).map(|m| f + fine_local(proj.apply(m))).collect();
            orbit.extend(cover_images);
            orbit.push(barycenter);

            let first_new = gens.len();
            for (g, lg) in gens.iter_mut().zip(lifted.generators()) {
                g.extend(lg.iter().map(|&m| t + m));
                g.push(apex);
            }
            for d in cover.deck.generators() {
                let mut g: Vec<VertexId> = (0..t).collect();
                g.extend(d.iter().map(|&m| t + m));
                g.push(apex);
                gens.push(g);
            }

            total = Arc::new(SimplicialComplex::from_simplices(apex + 1, total_gens.iter().cloned())?);
            fine = Arc::new(SimplicialComplex::from_simplices(barycenter + 1, fine_gens.iter().cloned())?);
            provenance.push(ResolvedSimplex {
                simplex: delta.clone(),
                l: cover.l(),
                boundary_vertices: nb,
                cover_vertices: nm,
                generators: (first_new, gens.len()),
                total_vertices: (t, apex + 1),
                orbit_vertices: (f, barycenter + 1),
            });
        }
    }

    let total = Arc::new(Arc::unwrap_or_clone(total).with_name(format!("resolution({})", base.name())));
    let fine = Arc::new(Arc::unwrap_or_clone(fine).with_name(format!("orbits({})", base.name())));
    let subdivision = Subdivision { fine: fine.clone(), coarse: base.clone(), carrier };
    let action = GroupAction::new(total.clone(), p.get(), gens)?;
    let orbit_map = SimplicialMap::new(total, fine, orbit)?;
    ResolutionStage::from_parts(p, subdivision, action, orbit_map, provenance)
}

pub const BOUNDARY_CHECK: &str = "boundary_inclusion_h1";
pub const SKELETON_CHECK: &str = "skeleton_inclusion_h1";
pub const QUOTIENT_CHECK: &str = "orbit_quotient";
pub const FIXED_CHECK: &str = "fixed_skeleton";

/// Runs every check on a stage:
///
/// * for each base simplex, `H_1` of the preimage of its boundary maps
///   isomorphically to `H_1` of the preimage of the simplex;
/// * `H_1` of the preimage of the base 1-skeleton maps isomorphically to
///   `H_1` of the whole complex;
/// * the orbit map is the quotient map of the action onto the declared
///   subdivision;
/// * the preimage of the 1-skeleton is fixed pointwise and mapped
///   isomorphically onto the unsubdivided 1-skeleton.
pub fn verify_resolution(s: &ResolutionStage) -> VerificationReport {
    let index = CarrierIndex::new(&s.total, s.orbit_map.vertex_map(), &s.subdivision);
    let mut checks = simplexwise_checks(BOUNDARY_CHECK, &index, &s.base, s.p, |c| c == Classification::Iso);

    let skeleton = index.over_skeleton(&s.base, 1);
    let whole = index.over_faces(s.base.iter().cloned());
    let r = inclusion_h1(&skeleton, &whole, s.p);
    checks.push(restriction_check(SKELETON_CHECK, Target::Named("1-skeleton".into()), &r, r.classification == Classification::Iso));

    let q = check_orbit_map(&s.action, &s.orbit_map);
    let mut c = Check::new(QUOTIENT_CHECK, Target::Named("total".into()), q.is_ok());
    if let Err(e) = q {
        c = c.with_detail(e);
    }
    checks.push(c);

    checks.push(fixed_skeleton_check(s, &skeleton.embedding));
    VerificationReport { checks }
}

fn fixed_skeleton_check(s: &ResolutionStage, skeleton_vertices: &[VertexId]) -> Check {
    let target = Target::Named("1-skeleton".into());
    for (gi, g) in s.action.generators().iter().enumerate() {
        if let Some(&v) = skeleton_vertices.iter().find(|&&v| g[v] != v) {
            return Check::new(FIXED_CHECK, target, false).with_detail(format!("generator {gi} moves vertex {v}"));
        }
    }
    let mut hit = vec![false; s.base.num_vertices()];
    for &v in skeleton_vertices {
        let c = &s.subdivision.carrier[s.orbit_map.apply(v)];
        if c.dim() != 0 || std::mem::replace(&mut hit[c.vertices()[0]], true) {
            return Check::new(FIXED_CHECK, target, false)
                .with_detail(format!("vertex {v} does not map to a distinct base vertex"));
        }
    }
    if hit.iter().any(|&h| !h) {
        return Check::new(FIXED_CHECK, target, false).with_detail("some base vertex has no preimage");
    }
    Check::new(FIXED_CHECK, target, true)
}

/// Ranks entering the Mayer–Vietoris sequence of `L = N ∪ D`, where `D` is
/// a maximal simplex and `N` the closure of the other maximal simplices,
/// lifted to the resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MayerVietoris {
    /// `dim H_1` of the whole resolution.
    pub direct: usize,
    /// `dim H_1` forced by exactness from the pieces.
    pub predicted: usize,
}

pub fn mayer_vietoris_check(s: &ResolutionStage, delta: &Simplex) -> Result<MayerVietoris> {
    let maximal = s.base.maximal_simplices();
    if !maximal.contains(delta) {
        return Err(validation(format!("{delta:?} is not a maximal simplex")));
    }
    let others: Vec<Simplex> = maximal.into_iter().filter(|m| m != delta).collect();
    let in_n = |f: &Simplex| others.iter().any(|m| f.is_face_of(m));
    let index = CarrierIndex::new(&s.total, s.orbit_map.vertex_map(), &s.subdivision);
    let n_hat = index.over_faces(s.base.iter().filter(|f| in_n(f)).cloned());
    let d_hat = index.over_simplex(delta);
    let i_hat = index.over_faces(delta.faces().filter(|f| in_n(f)));
    let whole = index.over_faces(s.base.iter().cloned());
    let p = s.p;

    // rank of (i_N, -i_D) on H_k of the intersection, k = 1 and reduced 0
    let stacked_rank = |k: usize| -> Result<(usize, usize, usize)> {
        let bi = homology_basis(&i_hat.complex, k, p, true);
        let bn = homology_basis(&n_hat.complex, k, p, true);
        let bd = homology_basis(&d_hat.complex, k, p, true);
        let into = |outer: &crate::complex::Subcomplex| -> Result<SimplicialMap> {
            let local = i_hat.embedding.iter().map(|&v| outer.local_vertex(v).expect("intersection inside")).collect();
            SimplicialMap::new(Arc::new(i_hat.complex.clone()), Arc::new(outer.complex.clone()), local)
        };
        let mn = induced_map_with(&into(&n_hat)?, &bi, &bn)?;
        let md = induced_map_with(&into(&d_hat)?, &bi, &bd)?;
        let mut m = FpMatrix::zeros(p, mn.rows() + md.rows(), bi.rank());
        for j in 0..bi.rank() {
            for i in 0..mn.rows() {
                m.set(i, j, mn.get(i, j));
            }
            for i in 0..md.rows() {
                m.set(mn.rows() + i, j, p.neg(md.get(i, j)));
            }
        }
        Ok((m.rank(), bi.rank(), bn.rank() + bd.rank()))
    };
    let (r1, _, sum1) = stacked_rank(1)?;
    let (r0, i0, _) = stacked_rank(0)?;
    let predicted = (sum1 - r1) + (i0 - r0);
    let direct = homology_basis(&whole.complex, 1, p, false).rank();
    Ok(MayerVietoris { direct, predicted })
}
