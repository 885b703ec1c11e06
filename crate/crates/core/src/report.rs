//! Verification reports and the per-simplex preimage checks shared by
//! resolutions and towers.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex, Subcomplex, VertexId};
use crate::homology::{restriction_classification, Classification, Restriction};
use crate::linalg::Prime;
use crate::map::SimplicialMap;
use crate::subdivision::Subdivision;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// What a check is about: one simplex of the base, or a named part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Simplex(Simplex),
    Named(String),
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Simplex(s) => write!(f, "{s:?}"),
            Target::Named(n) => f.write_str(n),
        }
    }
}

/// Dimensions of the source and target homology and the rank of the map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranks {
    pub domain: usize,
    pub codomain: usize,
    pub map: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub simplex: Target,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Ranks>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, target: Target, ok: bool) -> Self {
        Check {
            name: name.to_string(),
            simplex: target,
            status: Status::from_bool(ok),
            classification: None,
            ranks: None,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    fn from_restriction(name: &str, target: Target, r: &Restriction, ok: bool) -> Self {
        Check {
            classification: Some(r.classification),
            ranks: Some(Ranks { domain: r.domain_rank, codomain: r.codomain_rank, map: r.map_rank }),
            ..Check::new(name, target, ok)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{status}  {:<24} {}", c.name, c.simplex);
            if let Some(cl) = c.classification {
                let _ = write!(out, "  {cl}");
            }
            if let Some(r) = c.ranks {
                let _ = write!(out, "  ({} -> {}, rank {})", r.domain, r.codomain, r.map);
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, "  {d}");
            }
            out.push('\n');
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.checks.len(), failed);
        out
    }
}

/// Simplices of a complex grouped by the carrier, in a coarse complex, of
/// their image under a map into a subdivision of it.
pub(crate) struct CarrierIndex<'a> {
    total: &'a SimplicialComplex,
    groups: HashMap<Simplex, Vec<&'a Simplex>>,
}

impl<'a> CarrierIndex<'a> {
    pub fn new(total: &'a SimplicialComplex, to_fine: &[VertexId], sub: &Subdivision) -> Self {
        let mut groups: HashMap<Simplex, Vec<&Simplex>> = HashMap::new();
        for s in total.iter() {
            let img = s.map(|v| to_fine[v]);
            groups.entry(sub.carrier_of(&img)).or_default().push(s);
        }
        CarrierIndex { total, groups }
    }

    /// Subcomplex of the simplices whose carrier is one of `faces`.
    pub fn over_faces(&self, faces: impl Iterator<Item = Simplex>) -> Subcomplex {
        let mut keep: Vec<Simplex> = Vec::new();
        for f in faces {
            if let Some(g) = self.groups.get(&f) {
                keep.extend(g.iter().map(|s| (*s).clone()));
            }
        }
        Subcomplex::from_parent_simplices(self.total, keep).expect("carrier preimage is a subcomplex")
    }

    pub fn over_simplex(&self, sigma: &Simplex) -> Subcomplex {
        self.over_faces(sigma.faces())
    }

    pub fn over_boundary(&self, sigma: &Simplex) -> Subcomplex {
        self.over_faces(sigma.faces().filter(|f| f != sigma))
    }

    pub fn over_skeleton(&self, coarse: &SimplicialComplex, k: usize) -> Subcomplex {
        self.over_faces((0..=k).flat_map(|d| coarse.simplices(d).iter().cloned()))
    }
}

/// Classification of `H_1` of the inclusion of `inner` into `outer`, both
/// subcomplexes of the same parent with `inner` inside `outer`.
pub(crate) fn inclusion_h1(inner: &Subcomplex, outer: &Subcomplex, p: Prime) -> Restriction {
    let local: Vec<VertexId> = inner
        .embedding
        .iter()
        .map(|&v| outer.local_vertex(v).expect("inner lies in outer"))
        .collect();
    let f = SimplicialMap::new(Arc::new(inner.complex.clone()), Arc::new(outer.complex.clone()), local)
        .expect("inclusion is simplicial");
    restriction_classification(&f, 1, p).expect("inclusion is injective")
}

/// One check per coarse simplex: the map on `H_1` induced by the inclusion
/// of the preimage of its boundary into the preimage of the simplex, judged
/// by `accept`.
pub(crate) fn simplexwise_checks(
    name: &str,
    index: &CarrierIndex<'_>,
    coarse: &SimplicialComplex,
    p: Prime,
    accept: fn(Classification) -> bool,
) -> Vec<Check> {
    let simplices: Vec<&Simplex> = coarse.iter().collect();
    simplices
        .par_iter()
        .map(|sigma| {
            let inner = index.over_boundary(sigma);
            let outer = index.over_simplex(sigma);
            let r = inclusion_h1(&inner, &outer, p);
            Check::from_restriction(name, Target::Simplex((*sigma).clone()), &r, accept(r.classification))
        })
        .collect()
}

pub(crate) fn restriction_check(name: &str, target: Target, r: &Restriction, ok: bool) -> Check {
    Check::from_restriction(name, target, r, ok)
}
