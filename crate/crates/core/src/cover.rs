//! Regular `(Z_p)^l` covers classified by the mod-p Hurewicz map, built from
//! an edge voltage cochain, and equivariant lifting of base actions.

use std::collections::{BTreeMap, VecDeque};
use std::sync::Arc;

use crate::action::GroupAction;
use crate::complex::{Simplex, SimplicialComplex, VertexId};
use crate::error::{validation, Error, Result};
use crate::homology::{homology_basis, induced_map_with, HomologyBasis};
use crate::linalg::{FpMatrix, Prime};
use crate::map::SimplicialMap;
use crate::report::{Check, Target, VerificationReport};
use crate::util::{vector_from_index, vector_index};

/// Edge voltages with values in `H_1(base; F_p) = F_p^l`.
#[derive(Clone, Debug)]
pub struct VoltageAssignment {
    pub base: Arc<SimplicialComplex>,
    pub p: Prime,
    pub l: usize,
    pub root: VertexId,
    /// Spanning-tree edges in the order they were discovered.
    pub tree: Vec<Simplex>,
    /// Voltage of each edge `[u < v]` oriented from `u` to `v`, indexed like
    /// the base's 1-simplices.
    pub edge_voltage: Vec<Vec<u32>>,
    pub basis: HomologyBasis,
}

impl VoltageAssignment {
    /// Voltage of the oriented edge `u -> v`.
    pub fn voltage(&self, u: VertexId, v: VertexId) -> Vec<u32> {
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        let e = Simplex::from_sorted(vec![lo, hi]);
        let idx = self.base.index_of(&e).expect("voltage of a non-edge");
        let w = &self.edge_voltage[idx];
        if u < v {
            w.clone()
        } else {
            w.iter().map(|&x| self.p.neg(x)).collect()
        }
    }

    /// Voltages keyed by edge, for serialization.
    pub fn as_map(&self) -> BTreeMap<Simplex, Vec<u32>> {
        self.base.simplices(1).iter().cloned().zip(self.edge_voltage.iter().cloned()).collect()
    }

    fn check_cocycle(&self) -> Result<()> {
        let p = self.p;
        for t in self.base.simplices(2) {
            let [u, v, w] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
            let (a, b, c) = (self.voltage(u, v), self.voltage(v, w), self.voltage(u, w));
            if (0..self.l).any(|j| p.sub(p.add(a[j], b[j]), c[j]) != 0) {
                return Err(Error::Internal(format!("voltage is not a cocycle on {t:?}")));
            }
        }
        Ok(())
    }
}

/// Voltage assignment from a breadth-first spanning tree rooted at vertex 0.
/// The voltage of `[u, v]` is the homology class of the loop going out along
/// the tree to `u`, across the edge, and back from `v`.
pub fn voltage_assignment(base: &Arc<SimplicialComplex>, p: Prime) -> Result<VoltageAssignment> {
    let n = base.num_vertices();
    if n == 0 {
        return Err(validation("cannot cover the empty complex"));
    }
    let (components, _) = base.connected_components();
    if components != 1 {
        return Err(Error::Disconnected(components));
    }
    let edges = base.simplices(1);
    let mut adj: Vec<Vec<(VertexId, usize)>> = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        let (u, v) = (e.vertices()[0], e.vertices()[1]);
        adj[u].push((v, i));
        adj[v].push((u, i));
    }

    // parent edge and depth for each vertex
    let root = 0;
    let mut parent: Vec<Option<(VertexId, usize)>> = vec![None; n];
    let mut depth = vec![usize::MAX; n];
    let mut tree = Vec::new();
    let mut is_tree = vec![false; edges.len()];
    depth[root] = 0;
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for &(v, e) in &adj[u] {
            if depth[v] == usize::MAX {
                depth[v] = depth[u] + 1;
                parent[v] = Some((u, e));
                is_tree[e] = true;
                tree.push(edges[e].clone());
                queue.push_back(v);
            }
        }
    }

    let basis = homology_basis(base, 1, p, false);
    let l = basis.rank();
    let mut edge_voltage = vec![vec![0; l]; edges.len()];
    if l > 0 {
        for (i, e) in edges.iter().enumerate() {
            if is_tree[i] {
                continue;
            }
            let (u, v) = (e.vertices()[0], e.vertices()[1]);
            let mut chain = vec![0u32; edges.len()];
            chain[i] = 1;
            // tree path from v up to u: add path root->u, subtract path root->v
            let (mut a, mut b) = (u, v);
            while a != b {
                if depth[a] >= depth[b] {
                    let (pa, ea) = parent[a].expect("non-root has a parent");
                    // oriented pa -> a, sign +1 if pa < a
                    let s = if pa < a { 1 } else { p.neg(1) };
                    chain[ea] = p.add(chain[ea], s);
                    a = pa;
                } else {
                    let (pb, eb) = parent[b].expect("non-root has a parent");
                    let s = if pb < b { p.neg(1) } else { 1 };
                    chain[eb] = p.add(chain[eb], s);
                    b = pb;
                }
            }
            edge_voltage[i] = basis
                .coordinates(&chain)
                .map_err(|_| Error::Internal(format!("fundamental loop of {e:?} is not a cycle")))?;
        }
    }
    let va = VoltageAssignment { base: base.clone(), p, l, root, tree, edge_voltage, basis };
    va.check_cocycle()?;
    Ok(va)
}

/// A regular cover with deck group `(Z_p)^l`. Total vertex `(v, a)` has
/// index `v * p^l + index(a)`, with `a` enumerated last coordinate fastest.
#[derive(Clone, Debug)]
pub struct Cover {
    pub base: Arc<SimplicialComplex>,
    pub total: Arc<SimplicialComplex>,
    pub projection: SimplicialMap,
    pub deck: GroupAction,
    pub voltage: VoltageAssignment,
}

impl Cover {
    pub fn p(&self) -> Prime {
        self.voltage.p
    }

    pub fn l(&self) -> usize {
        self.voltage.l
    }

    pub fn sheets(&self) -> usize {
        (self.p().get() as usize).pow(self.l() as u32)
    }

    pub fn vertex(&self, v: VertexId, a: &[u32]) -> VertexId {
        v * self.sheets() + vector_index(a, self.p().get())
    }

    pub fn coordinates(&self, x: VertexId) -> (VertexId, Vec<u32>) {
        let s = self.sheets();
        (x / s, vector_from_index(x % s, self.p().get(), self.l()))
    }

    /// Checks that the deck quotient is the base with the projection as
    /// orbit map.
    pub fn check_quotient(&self) -> Result<bool> {
        let (q, orbit) = crate::action::quotient_by_action(&self.deck)?;
        Ok(q.same_simplices(&self.base) && orbit.vertex_map() == self.projection.vertex_map())
    }
}

pub const SHEET_CHECK: &str = "sheet_count";
pub const EULER_CHECK: &str = "euler_characteristic";
pub const ZERO_CHECK: &str = "projection_h1_zero";
pub const DECK_QUOTIENT_CHECK: &str = "deck_quotient";
pub const FREE_CHECK: &str = "deck_free";

/// Checks a cover: `p^l` vertices and simplices over each base simplex,
/// multiplicativity of the Euler characteristic, vanishing of the
/// projection on `H_1`, freeness of the deck group, and that the projection
/// is its orbit map.
pub fn verify_cover(c: &Cover) -> VerificationReport {
    let target = || Target::Named("cover".into());
    let sheets = c.sheets();
    let mut over = vec![0usize; c.base.total_simplices()];
    let offsets: Vec<usize> = (0..c.base.f_vector().len())
        .scan(0, |acc, d| {
            let here = *acc;
            *acc += c.base.count(d);
            Some(here)
        })
        .collect();
    for s in c.total.iter() {
        let img = c.projection.image(s);
        if img.dim() == s.dim() {
            over[offsets[s.dim()] + c.base.index_of(&img).expect("projection is simplicial")] += 1;
        }
    }
    let bad = over.iter().position(|&n| n != sheets);
    let mut checks = vec![{
        let ch = Check::new(SHEET_CHECK, target(), bad.is_none());
        match bad {
            Some(i) => ch.with_detail(format!("base simplex {i} has {} lifts, expected {sheets}", over[i])),
            None => ch,
        }
    }];
    let (chi_t, chi_b) = (c.total.euler_characteristic(), c.base.euler_characteristic());
    checks.push(
        Check::new(EULER_CHECK, target(), chi_t == sheets as i64 * chi_b)
            .with_detail(format!("{chi_t} = {sheets} * {chi_b}")),
    );
    match crate::homology::classify_map(&c.projection, 1, c.p()) {
        Ok(r) => checks.push(crate::report::restriction_check(ZERO_CHECK, target(), &r, r.matrix.is_zero())),
        Err(e) => checks.push(Check::new(ZERO_CHECK, target(), false).with_detail(e.to_string())),
    }
    checks.push(Check::new(FREE_CHECK, target(), c.deck.rank() == c.l() && c.deck.is_free()));
    let q = crate::action::check_orbit_map(&c.deck, &c.projection);
    let mut ch = Check::new(DECK_QUOTIENT_CHECK, target(), q.is_ok());
    if let Err(e) = q {
        ch = ch.with_detail(e);
    }
    checks.push(ch);
    VerificationReport { checks }
}

/// The regular cover of `base` with group `H_1(base; F_p)`.
pub fn build_cover(base: &Arc<SimplicialComplex>, p: Prime) -> Result<Cover> {
    let voltage = voltage_assignment(base, p)?;
    Ok(cover_from_voltage(voltage))
}

pub(crate) fn cover_from_voltage(voltage: VoltageAssignment) -> Cover {
    let base = voltage.base.clone();
    let p = voltage.p;
    let l = voltage.l;
    let sheets = (p.get() as usize).pow(l as u32);
    let n = base.num_vertices();
    let vector = |i: usize| vector_from_index(i, p.get(), l);
    let add = |a: &[u32], b: &[u32]| -> Vec<u32> { a.iter().zip(b).map(|(&x, &y)| p.add(x, y)).collect() };

    let mut gens = Vec::with_capacity(base.maximal_simplices().len() * sheets);
    for s in base.maximal_simplices() {
        let vs = s.vertices();
        let shifts: Vec<Vec<u32>> = vs.iter().map(|&v| if v == vs[0] { vec![0; l] } else { voltage.voltage(vs[0], v) }).collect();
        for ai in 0..sheets {
            let a = vector(ai);
            let lifted: Vec<VertexId> =
                vs.iter().zip(&shifts).map(|(&v, d)| v * sheets + vector_index(&add(&a, d), p.get())).collect();
            gens.push(Simplex::collapse(lifted));
        }
    }
    let labels: Vec<String> = if l == 0 {
        (0..n).map(|v| base.label(v)).collect()
    } else {
        (0..n * sheets)
            .map(|x| {
                let a = vector(x % sheets);
                let coords: Vec<String> = a.iter().map(|c| c.to_string()).collect();
                format!("{}:{}", base.label(x / sheets), coords.join(","))
            })
            .collect()
    };
    let total = SimplicialComplex::from_simplices(n * sheets, gens)
        .and_then(|k| k.with_labels(labels))
        .expect("lifted simplices cover every vertex")
        .with_name(format!("cover({})", base.name()));
    let total = Arc::new(total);
    let projection = SimplicialMap::new(total.clone(), base.clone(), (0..n * sheets).map(|x| x / sheets).collect())
        .expect("projection is simplicial");
    let deck_gens: Vec<Vec<VertexId>> = (0..l)
        .map(|j| {
            let mut e = vec![0; l];
            e[j] = 1;
            (0..n * sheets)
                .map(|x| (x / sheets) * sheets + vector_index(&add(&vector(x % sheets), &e), p.get()))
                .collect()
        })
        .collect();
    let deck = GroupAction::new_unchecked(total.clone(), p.get(), deck_gens);
    debug_assert!(deck.validate().is_ok());
    Cover { base, total, projection, deck, voltage }
}

/// Lifts an action on the base to the cover, fixing `(x0, 0)` for the least
/// vertex `x0` fixed by every generator.
///
/// Requires the action to fix some vertex and to act trivially on
/// `H_1(base; F_p)`; the lift of `g` sends `(v, a)` to
/// `(g v, a + psi(v))`, with `psi` propagated along the spanning tree.
pub fn lift_action(cover: &Cover, action: &GroupAction) -> Result<GroupAction> {
    let base = &cover.base;
    if action.complex().num_vertices() != base.num_vertices() || !action.complex().same_simplices(base) {
        return Err(validation("action is not on the base of the cover"));
    }
    let p = cover.p();
    if action.order() != p.get() {
        return Err(validation(format!("action has order {} but the cover is mod {p}", action.order())));
    }
    if action.rank() == 0 {
        return Ok(GroupAction::trivial(cover.total.clone(), p.get()));
    }
    let Some(&x0) = action.fixed_vertices().first() else {
        return Err(Error::Hypothesis("no vertex is fixed by every generator, so there is no base point to lift".into()));
    };

    let h = &cover.voltage.basis;
    let l = cover.l();
    let n = base.num_vertices();
    let sheets = cover.sheets();
    let mut lifted = Vec::with_capacity(action.rank());
    for (gi, g) in action.generators().iter().enumerate() {
        let gmap = SimplicialMap::new(base.clone(), base.clone(), g.clone())?;
        let m = induced_map_with(&gmap, h, h)?;
        if m != FpMatrix::identity(p, l) {
            return Err(Error::Hypothesis(format!("generator {gi} acts nontrivially on H_1 of the base")));
        }

        // psi(v) - psi(u) = voltage(gu, gv) - voltage(u, v) along every edge
        let mut psi: Vec<Option<Vec<u32>>> = vec![None; n];
        psi[x0] = Some(vec![0; l]);
        let mut adj: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for e in base.simplices(1) {
            adj[e.vertices()[0]].push(e.vertices()[1]);
            adj[e.vertices()[1]].push(e.vertices()[0]);
        }
        let step = |u: VertexId, v: VertexId, pu: &[u32]| -> Vec<u32> {
            let a = cover.voltage.voltage(g[u], g[v]);
            let b = cover.voltage.voltage(u, v);
            (0..l).map(|j| p.add(pu[j], p.sub(a[j], b[j]))).collect()
        };
        let mut queue = VecDeque::from([x0]);
        while let Some(u) = queue.pop_front() {
            let pu = psi[u].clone().expect("queued vertices are assigned");
            for &v in &adj[u] {
                let want = step(u, v, &pu);
                match &psi[v] {
                    None => {
                        psi[v] = Some(want);
                        queue.push_back(v);
                    }
                    Some(have) if *have != want => {
                        let (a, b) = if u < v { (u, v) } else { (v, u) };
                        return Err(Error::Hypothesis(format!(
                            "lift of generator {gi} is inconsistent around the loop closed by edge [{a}, {b}]"
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let perm: Vec<VertexId> = (0..n * sheets)
            .map(|x| {
                let (v, a) = cover.coordinates(x);
                let d = psi[v].as_ref().expect("base is connected");
                let b: Vec<u32> = (0..l).map(|j| p.add(a[j], d[j])).collect();
                cover.vertex(g[v], &b)
            })
            .collect();
        lifted.push(perm);
    }

    for (i, g) in lifted.iter().enumerate() {
        for (j, t) in cover.deck.generators().iter().enumerate() {
            if (0..n * sheets).any(|x| g[t[x]] != t[g[x]]) {
                return Err(Error::Internal(format!("lifted generator {i} does not commute with deck generator {j}")));
            }
        }
    }
    GroupAction::new(cover.total.clone(), p.get(), lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::quotient_by_action;
    use crate::homology::induced_map_on_homology;

    fn k(m: &[&[usize]]) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::closure_from_maximal(&m.iter().map(|s| s.to_vec()).collect::<Vec<_>>()).unwrap())
    }

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn triangle_loop() -> Arc<SimplicialComplex> {
        k(&[&[0, 1], &[1, 2], &[0, 2]])
    }

    #[test]
    fn tree_has_no_voltage() {
        let t = k(&[&[0, 1], &[1, 2], &[1, 3]]);
        let v = voltage_assignment(&t, p(2)).unwrap();
        assert_eq!(v.l, 0);
        assert_eq!(v.tree.len(), 3);
        let c = build_cover(&t, p(3)).unwrap();
        assert_eq!(c.total.f_vector(), t.f_vector());
    }

    #[test]
    fn loop_voltage_on_the_non_tree_edge() {
        let v = voltage_assignment(&triangle_loop(), p(2)).unwrap();
        assert_eq!(v.l, 1);
        assert_eq!(v.tree, vec![Simplex::new(vec![0, 1]).unwrap(), Simplex::new(vec![0, 2]).unwrap()]);
        assert_eq!(v.voltage(1, 2), vec![1]);
        assert_eq!(v.voltage(0, 1), vec![0]);
    }

    #[test]
    fn double_cover_of_the_loop() {
        let c = build_cover(&triangle_loop(), p(2)).unwrap();
        assert_eq!(c.total.f_vector(), vec![6, 6]);
        assert!(c.total.is_connected());
        assert!(induced_map_on_homology(&c.projection, 1, p(2)).unwrap().is_zero());
        assert!(c.check_quotient().unwrap());
        assert!(verify_cover(&c).passed(), "{}", verify_cover(&c).to_text());
        // every total vertex has two neighbours
        let mut deg = vec![0; 6];
        for e in c.total.simplices(1) {
            deg[e.vertices()[0]] += 1;
            deg[e.vertices()[1]] += 1;
        }
        assert!(deg.iter().all(|&d| d == 2));
    }

    #[test]
    fn cover_of_a_disk_is_trivial() {
        let tri = k(&[&[0, 1, 2]]);
        let c = build_cover(&tri, p(2)).unwrap();
        assert_eq!(c.l(), 0);
        assert!(c.total.same_simplices(&tri));
    }

    #[test]
    fn disconnected_base_errors() {
        let two = k(&[&[0, 1], &[2, 3]]);
        assert!(matches!(build_cover(&two, p(2)), Err(Error::Disconnected(2))));
    }

    #[test]
    fn reflection_lifts_and_commutes() {
        let c = build_cover(&triangle_loop(), p(2)).unwrap();
        let refl = GroupAction::new(c.base.clone(), 2, vec![vec![0, 2, 1]]).unwrap();
        let lifted = lift_action(&c, &refl).unwrap();
        assert_eq!(lifted.generators(), &[vec![0, 1, 4, 5, 2, 3]]);
        assert_eq!(c.deck.generators(), &[vec![1, 0, 3, 2, 5, 4]]);
        let _ = quotient_by_action(&c.deck).unwrap();
    }

    #[test]
    fn rotation_without_fixed_vertex_is_rejected() {
        let c = build_cover(&triangle_loop(), p(3)).unwrap();
        let rot = GroupAction::new(c.base.clone(), 3, vec![vec![1, 2, 0]]).unwrap();
        match lift_action(&c, &rot) {
            Err(Error::Hypothesis(msg)) => assert!(msg.contains("no vertex is fixed")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn swapping_two_loops_is_not_liftable_mod_two() {
        let wedge = k(&[&[0, 1], &[1, 2], &[0, 2], &[0, 3], &[3, 4], &[0, 4]]);
        let c = build_cover(&wedge, p(2)).unwrap();
        assert_eq!(c.l(), 2);
        let swap = GroupAction::new(wedge.clone(), 2, vec![vec![0, 3, 4, 1, 2]]).unwrap();
        assert!(matches!(lift_action(&c, &swap), Err(Error::Hypothesis(_))));
        let id = GroupAction::new(wedge, 2, vec![vec![0, 1, 2, 3, 4]]).unwrap();
        assert_eq!(lift_action(&c, &id).unwrap().generators()[0], (0..20).collect::<Vec<_>>());
    }
}
