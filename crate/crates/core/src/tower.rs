//! Finite stages of the pull-back tower over a fixed complex `Y`.
//!
//! Stage 1 is the resolution of `Y`, with projection `k_1` onto its orbit
//! space `Y_1`. For stage `i > 1`, let `R_i` be the barycentric subdivision
//! of `Y_{i-1}` and resolve it, giving `q_i: L_i -> Y_i` with `Y_i` a
//! subdivision of `R_i`. The previous stage `P_{i-1}` is re-triangulated by
//! pulling `Y_i` back along `k_{i-1}`, which gives `nu_{i-1}` and a map
//! `k'_{i-1}: nu_{i-1} -> Y_i`. Then `P_i` is the fiber product of `k'_{i-1}`
//! and `q_i`, with bonding map `p_i: P_i -> nu_{i-1}` and `k_i = q_i h_i`.
//! The new resolution is thus pulled back over the accumulated stage.
//! Old generators act on the `nu` factor, new ones on the `L_i` factor.

use std::sync::Arc;

use crate::action::{check_orbit_map, GroupAction};
use crate::complex::SimplicialComplex;
use crate::error::{validation, Result};
use crate::fiber::fiber_product;
use crate::homology::Classification;
use crate::linalg::Prime;
use crate::map::SimplicialMap;
use crate::report::{simplexwise_checks, CarrierIndex, Check, Target, VerificationReport};
use crate::resolution::{resolve, ResolutionStage};
use crate::subdivision::{barycentric_subdivision, Subdivision};

/// How a stage sits over the previous one.
#[derive(Clone, Debug)]
pub struct Bonding {
    /// Re-triangulation `nu_{i-1}` of the previous stage complex.
    pub retriangulated: Subdivision,
    /// `p_i: P_i -> nu_{i-1}`.
    pub map: SimplicialMap,
    /// `k'_{i-1}: nu_{i-1} -> Y_i`.
    pub previous_projection: SimplicialMap,
    /// `Y_i` as a subdivision of `Y_{i-1}`.
    pub base_over_previous: Subdivision,
}

#[derive(Clone, Debug)]
pub struct TowerStage {
    pub index: usize,
    pub p: Prime,
    /// Triangulation `R_i` the stage was resolved over.
    pub base: Arc<SimplicialComplex>,
    /// `Y_i` as a subdivision of `R_i`.
    pub subdivision: Subdivision,
    /// `Y_i` as a subdivision of the original complex.
    pub ambient: Subdivision,
    pub complex: Arc<SimplicialComplex>,
    /// `k_i: P_i -> Y_i`.
    pub projection: SimplicialMap,
    pub bonding: Option<Bonding>,
    pub action: GroupAction,
    /// Generators contributed by each stage so far.
    pub generator_counts: Vec<usize>,
    pub resolution: ResolutionStage,
    pub report: VerificationReport,
}

impl TowerStage {
    fn first(res: ResolutionStage) -> Self {
        let mut s = TowerStage {
            index: 1,
            p: res.p,
            base: res.base.clone(),
            subdivision: res.subdivision.clone(),
            ambient: res.subdivision.clone(),
            complex: res.total.clone(),
            projection: res.orbit_map.clone(),
            bonding: None,
            action: res.action.clone(),
            generator_counts: vec![res.m()],
            resolution: res,
            report: VerificationReport::default(),
        };
        s.report = verify_tower_stage(&s, None);
        s
    }

    /// The unresolved first stage over `y`: identity projection, no group.
    pub fn identity(y: &Arc<SimplicialComplex>, p: Prime) -> Self {
        TowerStage::first(ResolutionStage::identity(y, p))
    }

    pub fn total_generators(&self) -> usize {
        self.generator_counts.iter().sum()
    }
}

/// Builds stages `1..=depth` over `y`.
pub fn build_tower(y: &Arc<SimplicialComplex>, p: Prime, depth: usize) -> Result<Vec<TowerStage>> {
    if depth == 0 {
        return Err(validation("tower depth must be at least 1"));
    }
    let mut stages = vec![TowerStage::first(resolve(y, p)?)];
    for _ in 1..depth {
        let next = next_stage(stages.last().expect("nonempty"))?;
        stages.push(next);
    }
    Ok(stages)
}

/// Builds stage `i + 1` from stage `i`.
pub fn next_stage(prev: &TowerStage) -> Result<TowerStage> {
    let p = prev.p;
    let sd = barycentric_subdivision(&prev.subdivision.fine);
    let base = sd.fine.clone();
    let res = resolve(&base, p)?;
    // Y_i over Y_{i-1}, then over the original complex
    let over_prev = res.subdivision.compose(&sd)?;
    let ambient = over_prev.compose(&prev.ambient)?;

    let pulled = over_prev.pull_back(&prev.projection)?;
    let fp = fiber_product(&pulled.map, &res.orbit_map)?;

    let identity_right: Vec<usize> = (0..res.total.num_vertices()).collect();
    let identity_left: Vec<usize> = (0..pulled.subdivision.fine.num_vertices()).collect();
    let mut generators = Vec::with_capacity(prev.action.rank() + res.m());
    for g in prev.action.generators() {
        let moved = pulled.transport(g)?;
        generators.push(fp.product_permutation(&moved, &identity_right)?);
    }
    for h in res.action.generators() {
        generators.push(fp.product_permutation(&identity_left, h)?);
    }
    let action = GroupAction::new(fp.complex.clone(), p.get(), generators)?;
    let projection = fp.to_right.then(&res.orbit_map)?;
    let mut generator_counts = prev.generator_counts.clone();
    generator_counts.push(res.m());

    let mut s = TowerStage {
        index: prev.index + 1,
        p,
        base,
        subdivision: res.subdivision.clone(),
        ambient,
        complex: fp.complex.clone(),
        projection,
        bonding: Some(Bonding {
            retriangulated: pulled.subdivision.clone(),
            map: fp.to_left.clone(),
            previous_projection: pulled.map.clone(),
            base_over_previous: over_prev,
        }),
        action,
        generator_counts,
        resolution: res,
        report: VerificationReport::default(),
    };
    s.report = verify_tower_stage(&s, Some(prev));
    Ok(s)
}

pub const MONO_CHECK: &str = "boundary_inclusion_h1_mono";
pub const FIBER_CHECK: &str = "vertex_fibers";
pub const COMMUTE_CHECK: &str = "bonding_commutes";
pub const CARRIER_CHECK: &str = "retriangulation_carriers";
pub const QUOTIENT_CHECK: &str = "orbit_quotient";

/// Checks a stage:
///
/// * for each simplex `eta` of `R_i`, `H_1` of the preimage of its boundary
///   injects into `H_1` of the preimage of `eta` (dually, restriction on
///   `H^1` is onto);
/// * every vertex fiber of `k_i` has `p^j` elements for some `j` at most the
///   total generator count;
/// * `k'_{i-1} p_i = k_i`, and the re-triangulation is carried compatibly
///   with `k_{i-1}` (needs the previous stage);
/// * `k_i` is the quotient map of the cumulative action onto `Y_i`.
pub fn verify_tower_stage(s: &TowerStage, prev: Option<&TowerStage>) -> VerificationReport {
    let index = CarrierIndex::new(&s.complex, s.projection.vertex_map(), &s.subdivision);
    let mut checks = simplexwise_checks(MONO_CHECK, &index, &s.base, s.p, Classification::is_mono);

    let target = || Target::Named(format!("stage {}", s.index));
    let mut fiber = vec![0usize; s.subdivision.fine.num_vertices()];
    for v in 0..s.complex.num_vertices() {
        fiber[s.projection.apply(v)] += 1;
    }
    let total = s.total_generators() as u32;
    let bad = fiber.iter().enumerate().find(|&(_, &n)| !is_power_at_most(n, s.p.get() as usize, total));
    let mut c = Check::new(FIBER_CHECK, target(), bad.is_none());
    if let Some((y, n)) = bad {
        c = c.with_detail(format!("{n} vertices over {y}, not a divisor of {}^{total}", s.p));
    }
    checks.push(c);

    if let Some(b) = &s.bonding {
        let commutes = (0..s.complex.num_vertices())
            .all(|v| b.previous_projection.apply(b.map.apply(v)) == s.projection.apply(v));
        checks.push(Check::new(COMMUTE_CHECK, target(), commutes));
        if let Some(prev) = prev {
            let ok = (0..b.retriangulated.fine.num_vertices()).all(|v| {
                let down = b.retriangulated.carrier[v].map(|x| prev.projection.apply(x));
                let y = b.previous_projection.apply(v);
                down == b.base_over_previous.carrier[y]
            });
            checks.push(Check::new(CARRIER_CHECK, target(), ok));
        }
    }

    let q = check_orbit_map(&s.action, &s.projection);
    let mut c = Check::new(QUOTIENT_CHECK, target(), q.is_ok());
    if let Err(e) = q {
        c = c.with_detail(e);
    }
    checks.push(c);
    VerificationReport { checks }
}

fn is_power_at_most(n: usize, p: usize, max_exp: u32) -> bool {
    let mut v = 1usize;
    for _ in 0..=max_exp {
        if v == n {
            return true;
        }
        match v.checked_mul(p) {
            Some(next) if next <= n => v = next,
            _ => return false,
        }
    }
    false
}
