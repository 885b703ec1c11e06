//! JSON formats for complexes, maps, actions and subdivisions, and the
//! directory layouts of saved covers, resolutions and towers.
//!
//! * complex: `{"name", "vertices" (optional labels), "maximal_simplices"}`;
//!   simplices index into `vertices` when present, otherwise the distinct
//!   integers used are the vertices in increasing order;
//! * map: `{"domain": path, "codomain": path, "vertex_map"}`;
//! * action: `{"complex": path, "p", "generators"}`;
//! * subdivision: `{"fine": path, "coarse": path, "carrier"}`.
//!
//! Paths inside files are relative to the file's directory.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::action::GroupAction;
use crate::complex::{Simplex, SimplicialComplex};
use crate::cover::{voltage_assignment, Cover};
use crate::error::{validation, Result};
use crate::linalg::Prime;
use crate::map::SimplicialMap;
use crate::report::VerificationReport;
use crate::resolution::{ResolutionStage, ResolvedSimplex};
use crate::subdivision::Subdivision;
use crate::tower::{verify_tower_stage, Bonding, TowerStage};

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    #[serde(default)]
    name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Value>>,
    maximal_simplices: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct MapFile {
    domain: String,
    codomain: String,
    vertex_map: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ActionFile {
    complex: String,
    p: u32,
    generators: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct SubdivisionFile {
    fine: String,
    coarse: String,
    carrier: Vec<Vec<usize>>,
}

/// Serializes with one line per object field and per element of an array
/// of arrays or objects; everything else is compact.
pub fn to_layout_json(v: &Value) -> String {
    let mut out = String::new();
    layout(v, 0, &mut out);
    out.push('\n');
    out
}

fn layout(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Object(m) if !m.is_empty() => {
            out.push_str("{\n");
            for (i, (k, val)) in m.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                layout(val, indent + 1, out);
                if i + 1 < m.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        Value::Array(a) if !a.is_empty() && a.iter().all(|x| x.is_array() || x.is_object()) => {
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                out.push_str(&pad);
                if x.is_object() {
                    layout(x, indent + 1, out);
                } else {
                    out.push_str(&x.to_string());
                }
                if i + 1 < a.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        other => out.push_str(&other.to_string()),
    }
}

fn write_value(path: &Path, v: &Value) -> Result<()> {
    fs::write(path, to_layout_json(v))?;
    Ok(())
}

fn read_value<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
}

pub fn complex_to_value(k: &SimplicialComplex) -> Value {
    let file = ComplexFile {
        name: k.name().to_string(),
        vertices: k.labels().map(|l| l.iter().map(|s| Value::String(s.clone())).collect()),
        maximal_simplices: k.maximal_simplices().into_iter().map(|s| s.vertices().to_vec()).collect(),
    };
    serde_json::to_value(file).expect("complex serializes")
}

pub fn complex_to_json(k: &SimplicialComplex) -> String {
    to_layout_json(&complex_to_value(k))
}

pub fn complex_from_json(text: &str) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(text).map_err(|e| validation(format!("bad complex file: {e}")))?;
    complex_from_file(file)
}

fn complex_from_file(file: ComplexFile) -> Result<SimplicialComplex> {
    for s in &file.maximal_simplices {
        if s.is_empty() {
            return Err(validation("empty simplex in maximal_simplices"));
        }
    }
    let k = match file.vertices {
        Some(vs) => {
            let labels = vs
                .into_iter()
                .map(|v| match v {
                    Value::String(s) => Ok(s),
                    Value::Number(n) => Ok(n.to_string()),
                    other => Err(validation(format!("vertex label {other} is neither a string nor a number"))),
                })
                .collect::<Result<Vec<_>>>()?;
            let mut seen = std::collections::HashSet::new();
            if let Some(dup) = labels.iter().find(|l| !seen.insert(*l)) {
                return Err(validation(format!("duplicate vertex label {dup}")));
            }
            if let Some(bad) = file.maximal_simplices.iter().flatten().find(|&&v| v >= labels.len()) {
                return Err(validation(format!("vertex {bad} out of range for {} labels", labels.len())));
            }
            SimplicialComplex::from_labeled(&file.name, labels, &file.maximal_simplices)?
        }
        None => SimplicialComplex::closure_from_maximal(&file.maximal_simplices)?.with_name(file.name),
    };
    Ok(k)
}

pub fn read_complex(path: &Path) -> Result<SimplicialComplex> {
    complex_from_file(read_value(path)?)
}

pub fn write_complex(path: &Path, k: &SimplicialComplex) -> Result<()> {
    write_value(path, &complex_to_value(k))
}

pub fn write_map(path: &Path, f: &SimplicialMap, domain: &str, codomain: &str) -> Result<()> {
    let file = MapFile { domain: domain.into(), codomain: codomain.into(), vertex_map: f.vertex_map().to_vec() };
    write_value(path, &serde_json::to_value(file)?)
}

pub fn write_action(path: &Path, a: &GroupAction, complex: &str) -> Result<()> {
    let file = ActionFile { complex: complex.into(), p: a.order(), generators: a.generators().to_vec() };
    write_value(path, &serde_json::to_value(file)?)
}

pub fn write_subdivision(path: &Path, s: &Subdivision, fine: &str, coarse: &str) -> Result<()> {
    let file = SubdivisionFile {
        fine: fine.into(),
        coarse: coarse.into(),
        carrier: s.carrier.iter().map(|c| c.vertices().to_vec()).collect(),
    };
    write_value(path, &serde_json::to_value(file)?)
}

/// Reads files, sharing complexes that are referenced more than once.
#[derive(Default)]
pub struct Loader {
    cache: HashMap<PathBuf, Arc<SimplicialComplex>>,
}

fn resolve_path(base: &Path, rel: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(rel)
}

impl Loader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn complex(&mut self, path: &Path) -> Result<Arc<SimplicialComplex>> {
        let key = fs::canonicalize(path).map_err(|e| validation(format!("cannot read {}: {e}", path.display())))?;
        if let Some(k) = self.cache.get(&key) {
            return Ok(k.clone());
        }
        let k = Arc::new(read_complex(path)?);
        self.cache.insert(key, k.clone());
        Ok(k)
    }

    pub fn map(&mut self, path: &Path) -> Result<SimplicialMap> {
        let file: MapFile = read_value(path)?;
        let domain = self.complex(&resolve_path(path, &file.domain))?;
        let codomain = self.complex(&resolve_path(path, &file.codomain))?;
        SimplicialMap::new(domain, codomain, file.vertex_map)
    }

    pub fn action(&mut self, path: &Path) -> Result<GroupAction> {
        let file: ActionFile = read_value(path)?;
        let complex = self.complex(&resolve_path(path, &file.complex))?;
        GroupAction::new(complex, file.p, file.generators)
    }

    pub fn subdivision(&mut self, path: &Path) -> Result<Subdivision> {
        let file: SubdivisionFile = read_value(path)?;
        let fine = self.complex(&resolve_path(path, &file.fine))?;
        let coarse = self.complex(&resolve_path(path, &file.coarse))?;
        let carrier = file.carrier.into_iter().map(Simplex::new).collect::<Result<Vec<_>>>()?;
        let s = Subdivision { fine, coarse, carrier };
        if s.carrier.len() != s.fine.num_vertices() || s.carrier.iter().any(|c| !s.coarse.contains(c)) {
            return Err(validation(format!("{}: carriers do not match the complexes", path.display())));
        }
        Ok(s)
    }
}

fn manifest_path(dir: &Path) -> PathBuf {
    dir.join("manifest.json")
}

fn voltage_value(c: &Cover) -> Value {
    let map: BTreeMap<String, Vec<u32>> = c
        .voltage
        .as_map()
        .into_iter()
        .map(|(e, v)| (format!("{},{}", e.vertices()[0], e.vertices()[1]), v))
        .collect();
    serde_json::to_value(map).expect("voltages serialize")
}

pub fn write_cover(dir: &Path, c: &Cover) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_complex(&dir.join("base.json"), &c.base)?;
    write_complex(&dir.join("total.json"), &c.total)?;
    write_map(&dir.join("projection.json"), &c.projection, "total.json", "base.json")?;
    write_action(&dir.join("deck.json"), &c.deck, "total.json")?;
    write_value(
        &dir.join("cover.json"),
        &json!({
            "base": "base.json",
            "total": "total.json",
            "p": c.p().get(),
            "l": c.l(),
            "projection": c.projection.vertex_map(),
            "deck_generators": c.deck.generators(),
            "voltage": voltage_value(c),
        }),
    )?;
    write_value(
        &manifest_path(dir),
        &json!({"kind": "cover", "p": c.p().get(), "l": c.l(), "files": {
            "base": "base.json", "total": "total.json", "cover": "cover.json",
            "projection": "projection.json", "deck": "deck.json"}}),
    )
}

/// Reads a saved cover. The voltage assignment is recomputed from the base
/// and must agree with the saved one.
pub fn read_cover(dir: &Path) -> Result<Cover> {
    let mut loader = Loader::new();
    let projection = loader.map(&dir.join("projection.json"))?;
    let deck = loader.action(&dir.join("deck.json"))?;
    let meta: Value = read_value(&dir.join("cover.json"))?;
    let p = Prime::new(meta["p"].as_u64().ok_or_else(|| validation("cover.json lacks p"))?)?;
    let base = projection.codomain().clone();
    let voltage = voltage_assignment(&base, p)?;
    let c = Cover { base, total: projection.domain().clone(), projection, deck, voltage };
    if meta["voltage"] != voltage_value(&c) {
        return Err(validation("saved voltages differ from the recomputed ones"));
    }
    Ok(c)
}

const RESOLUTION_FILES: [(&str, &str); 8] = [
    ("base", "base.json"),
    ("orbit_space", "orbit_space.json"),
    ("subdivision", "subdivision.json"),
    ("total", "total.json"),
    ("action", "action.json"),
    ("orbit_map", "orbit_map.json"),
    ("provenance", "provenance.json"),
    ("report", "report.json"),
];

pub fn write_resolution(dir: &Path, s: &ResolutionStage) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_complex(&dir.join("base.json"), &s.base)?;
    write_complex(&dir.join("orbit_space.json"), &s.subdivision.fine)?;
    write_subdivision(&dir.join("subdivision.json"), &s.subdivision, "orbit_space.json", "base.json")?;
    write_complex(&dir.join("total.json"), &s.total)?;
    write_action(&dir.join("action.json"), &s.action, "total.json")?;
    write_map(&dir.join("orbit_map.json"), &s.orbit_map, "total.json", "orbit_space.json")?;
    write_value(&dir.join("provenance.json"), &serde_json::to_value(&s.provenance)?)?;
    write_value(&dir.join("report.json"), &serde_json::to_value(&s.report)?)?;
    let files: BTreeMap<&str, &str> = RESOLUTION_FILES.into_iter().collect();
    write_value(
        &manifest_path(dir),
        &json!({"kind": "resolution", "p": s.p.get(), "m": s.m(), "passed": s.report.passed(), "files": files}),
    )
}

/// Reads a saved resolution and re-runs its verification.
pub fn read_resolution(dir: &Path) -> Result<ResolutionStage> {
    let mut loader = Loader::new();
    read_resolution_with(&mut loader, dir)
}

fn read_resolution_with(loader: &mut Loader, dir: &Path) -> Result<ResolutionStage> {
    let meta: Value = read_value(&manifest_path(dir))?;
    let p = Prime::new(meta["p"].as_u64().ok_or_else(|| validation("manifest lacks p"))?)?;
    let subdivision = loader.subdivision(&dir.join("subdivision.json"))?;
    let action = loader.action(&dir.join("action.json"))?;
    let orbit_map = loader.map(&dir.join("orbit_map.json"))?;
    let provenance: Vec<ResolvedSimplex> = read_value(&dir.join("provenance.json"))?;
    ResolutionStage::from_parts(p, subdivision, action, orbit_map, provenance)
}

pub const TOWER_CONVENTION: &str =
    "each new resolution is pulled back over the accumulated stage, re-triangulated by the finer base";

pub fn write_tower(dir: &Path, y: &SimplicialComplex, stages: &[TowerStage]) -> Result<()> {
    fs::create_dir_all(dir)?;
    write_complex(&dir.join("base.json"), y)?;
    let mut entries = Vec::new();
    for s in stages {
        let name = format!("stage_{}", s.index);
        let sd = dir.join(&name);
        fs::create_dir_all(&sd)?;
        write_complex(&sd.join("base.json"), &s.base)?;
        write_complex(&sd.join("orbit_space.json"), &s.subdivision.fine)?;
        write_subdivision(&sd.join("subdivision.json"), &s.subdivision, "orbit_space.json", "base.json")?;
        write_subdivision(&sd.join("ambient.json"), &s.ambient, "orbit_space.json", "../base.json")?;
        write_complex(&sd.join("complex.json"), &s.complex)?;
        write_map(&sd.join("projection.json"), &s.projection, "complex.json", "orbit_space.json")?;
        write_action(&sd.join("action.json"), &s.action, "complex.json")?;
        let mut files = vec![
            "base.json",
            "orbit_space.json",
            "subdivision.json",
            "ambient.json",
            "complex.json",
            "projection.json",
            "action.json",
            "report.json",
            "resolution",
        ];
        if let Some(b) = &s.bonding {
            let prev = format!("../stage_{}", s.index - 1);
            write_complex(&sd.join("retriangulated.json"), &b.retriangulated.fine)?;
            write_subdivision(
                &sd.join("retriangulation.json"),
                &b.retriangulated,
                "retriangulated.json",
                &format!("{prev}/complex.json"),
            )?;
            write_map(&sd.join("bonding.json"), &b.map, "complex.json", "retriangulated.json")?;
            write_map(&sd.join("previous_projection.json"), &b.previous_projection, "retriangulated.json", "orbit_space.json")?;
            write_subdivision(
                &sd.join("base_over_previous.json"),
                &b.base_over_previous,
                "orbit_space.json",
                &format!("{prev}/orbit_space.json"),
            )?;
            files.extend([
                "retriangulated.json",
                "retriangulation.json",
                "bonding.json",
                "previous_projection.json",
                "base_over_previous.json",
            ]);
        }
        write_value(&sd.join("report.json"), &serde_json::to_value(&s.report)?)?;
        write_resolution(&sd.join("resolution"), &s.resolution)?;
        entries.push(json!({
            "index": s.index,
            "m_i": s.generator_counts.last().copied().unwrap_or(0),
            "generator_counts": s.generator_counts,
            "dir": name,
            "passed": s.report.passed(),
            "files": files,
        }));
    }
    write_value(
        &manifest_path(dir),
        &json!({
            "kind": "tower",
            "p": stages.first().map_or(0, |s| s.p.get()),
            "depth": stages.len(),
            "convention": TOWER_CONVENTION,
            "base": "base.json",
            "stages": entries,
        }),
    )
}

/// Reads a saved tower and re-runs every stage's verification.
pub fn read_tower(dir: &Path) -> Result<Vec<TowerStage>> {
    let meta: Value = read_value(&manifest_path(dir))?;
    let p = Prime::new(meta["p"].as_u64().ok_or_else(|| validation("manifest lacks p"))?)?;
    let entries = meta["stages"].as_array().ok_or_else(|| validation("manifest lacks stages"))?;
    let mut loader = Loader::new();
    let mut stages: Vec<TowerStage> = Vec::new();
    for e in entries {
        let index = e["index"].as_u64().ok_or_else(|| validation("stage lacks index"))? as usize;
        let counts: Vec<usize> = serde_json::from_value(e["generator_counts"].clone())?;
        let sd = dir.join(e["dir"].as_str().ok_or_else(|| validation("stage lacks dir"))?);
        let subdivision = loader.subdivision(&sd.join("subdivision.json"))?;
        let ambient = loader.subdivision(&sd.join("ambient.json"))?;
        let projection = loader.map(&sd.join("projection.json"))?;
        let action = loader.action(&sd.join("action.json"))?;
        let bonding = if index > 1 {
            Some(Bonding {
                retriangulated: loader.subdivision(&sd.join("retriangulation.json"))?,
                map: loader.map(&sd.join("bonding.json"))?,
                previous_projection: loader.map(&sd.join("previous_projection.json"))?,
                base_over_previous: loader.subdivision(&sd.join("base_over_previous.json"))?,
            })
        } else {
            None
        };
        let resolution = read_resolution_with(&mut loader, &sd.join("resolution"))?;
        let mut s = TowerStage {
            index,
            p,
            base: subdivision.coarse.clone(),
            complex: projection.domain().clone(),
            subdivision,
            ambient,
            projection,
            bonding,
            action,
            generator_counts: counts,
            resolution,
            report: VerificationReport::default(),
        };
        s.report = verify_tower_stage(&s, stages.last());
        stages.push(s);
    }
    Ok(stages)
}

/// A saved artifact directory.
pub enum Saved {
    Cover(Cover),
    Resolution(ResolutionStage),
    Tower(Vec<TowerStage>),
}

pub fn read_saved(dir: &Path) -> Result<Saved> {
    let meta: Value = read_value(&manifest_path(dir))?;
    match meta["kind"].as_str() {
        Some("cover") => Ok(Saved::Cover(read_cover(dir)?)),
        Some("resolution") => Ok(Saved::Resolution(read_resolution(dir)?)),
        Some("tower") => Ok(Saved::Tower(read_tower(dir)?)),
        other => Err(validation(format!("unknown artifact kind {other:?}"))),
    }
}
