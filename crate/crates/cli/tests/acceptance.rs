//! Acceptance run: one PASS/FAIL line per criterion, driven through the
//! `mpres` binary where a command exists and through the library otherwise.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::Value;

use mpres::{build_cover, lift_action, Error, GroupAction, Prime};

const HOMOLOGY_LIMIT: Duration = Duration::from_secs(1);
const COVER_LIMIT: Duration = Duration::from_secs(60);
const RESOLVE_LIMIT: Duration = Duration::from_secs(30);
const TOWER_LIMIT: Duration = Duration::from_secs(300);
const RANDOM_SEED: &str = "2024";
const RANDOM_COUNT: usize = 20;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.json"))
}

fn mpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpres")).args(args).output().expect("binary runs")
}

fn json_stdout(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or(Value::Null)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap_or_default()).unwrap_or(Value::Null)
}

fn checks(report: &Value) -> Vec<Value> {
    report["checks"].as_array().cloned().unwrap_or_default()
}

fn passed(c: &Value) -> bool {
    c["status"] == "pass"
}

/// Every file under `dir` with its bytes, by relative path.
fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).into_iter().flatten().flatten() {
            let path = e.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                out.insert(path.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&path).unwrap());
            }
        }
    }
    out
}

/// Betti numbers by subset closure and Gaussian elimination mod p, straight
/// from the JSON file.
fn oracle_betti(path: &Path, p: i64) -> Vec<usize> {
    let v = read_json(path);
    let maximal: Vec<Vec<usize>> = serde_json::from_value(v["maximal_simplices"].clone()).unwrap();
    let mut faces: Vec<std::collections::BTreeSet<Vec<usize>>> = Vec::new();
    for s in &maximal {
        let mut s = s.clone();
        s.sort();
        for mask in 1u32..(1 << s.len()) {
            let f: Vec<usize> = (0..s.len()).filter(|i| mask & (1 << i) != 0).map(|i| s[i]).collect();
            if faces.len() < f.len() {
                faces.resize(f.len(), Default::default());
            }
            faces[f.len() - 1].insert(f);
        }
    }
    let faces: Vec<Vec<Vec<usize>>> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
    let mut ranks = vec![0usize; faces.len() + 1];
    for d in 1..faces.len() {
        let mut m = vec![vec![0i64; faces[d].len()]; faces[d - 1].len()];
        for (j, s) in faces[d].iter().enumerate() {
            for skip in 0..s.len() {
                let f: Vec<usize> = s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                let i = faces[d - 1].binary_search(&f).unwrap();
                m[i][j] = if skip % 2 == 0 { 1 } else { p - 1 };
            }
        }
        let mut rank = 0;
        let cols = faces[d].len();
        for c in 0..cols {
            let Some(r) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, r);
            let inv = (1..p).find(|x| m[rank][c] * x % p == 1).unwrap();
            for x in m[rank].iter_mut() {
                *x = *x * inv % p;
            }
            for r in 0..m.len() {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c];
                    for j in 0..cols {
                        m[r][j] = ((m[r][j] - f * m[rank][j]) % p + p) % p;
                    }
                }
            }
            rank += 1;
        }
        ranks[d] = rank;
    }
    (0..faces.len()).map(|d| faces[d].len() - ranks[d] - ranks[d + 1]).collect()
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn homology_suite() -> Outcome {
    let all: [(&str, i64, [usize; 3]); 12] = [
        ("three_cycle", 2, [1, 1, 0]),
        ("three_cycle", 3, [1, 1, 0]),
        ("triangle", 2, [1, 0, 0]),
        ("triangle", 3, [1, 0, 0]),
        ("tetra_boundary", 2, [1, 0, 1]),
        ("tetra_boundary", 3, [1, 0, 1]),
        ("torus7", 2, [1, 2, 1]),
        ("torus7", 3, [1, 2, 1]),
        ("rp2", 2, [1, 1, 1]),
        ("rp2", 3, [1, 0, 0]),
        ("klein", 2, [1, 2, 1]),
        ("klein", 3, [1, 1, 0]),
    ];
    let start = Instant::now();
    let mut bad = Vec::new();
    for (name, p, want) in &all {
        let path = corpus(name);
        let out = mpres(&["homology", "--prime", &p.to_string(), path.to_str().unwrap()]);
        let got: Vec<usize> = serde_json::from_value(json_stdout(&out)["betti"].clone()).unwrap_or_default();
        let mut padded = [0usize; 3];
        for (i, &b) in got.iter().take(3).enumerate() {
            padded[i] = b;
        }
        let mut oracle = [0usize; 3];
        for (i, b) in oracle_betti(&path, *p).into_iter().take(3).enumerate() {
            oracle[i] = b;
        }
        if !out.status.success() || padded != *want || oracle != *want {
            bad.push(format!("{name} mod {p}: got {padded:?}, oracle {oracle:?}, want {want:?}"));
        }
    }
    let torus = mpres(&["homology", "--report", "text", "--prime", "2", "--dim", "1", corpus("torus7").to_str().unwrap()]);
    if String::from_utf8_lossy(&torus.stdout).trim() != "rank 2" {
        bad.push("torus7 --dim 1 did not print rank 2".into());
    }
    let took = start.elapsed();
    outcome(
        bad.is_empty() && took < HOMOLOGY_LIMIT,
        format!("{} complex/prime pairs, {:.2?} (limit {:?}) {}", all.len(), took, HOMOLOGY_LIMIT, bad.join("; ")),
    )
}

fn random_covers(dir: &Path) -> (Outcome, Vec<u8>) {
    let start = Instant::now();
    let out = mpres(&["verify", "--random", "--seed", RANDOM_SEED, "--count", &RANDOM_COUNT.to_string()]);
    let took = start.elapsed();
    fs::write(dir.join("random.json"), &out.stdout).unwrap();
    let cs = checks(&json_stdout(&out));
    let mut per_complex: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for c in &cs {
        per_complex.entry(c["simplex"].as_str().unwrap_or("").to_string()).or_default().push(
            c["name"].as_str().unwrap_or("").to_string(),
        );
    }
    let kinds = ["sheet_count", "euler_characteristic", "projection_h1_zero", "deck_quotient", "deck_free"];
    let complete = per_complex.values().all(|names| kinds.iter().all(|k| names.iter().any(|n| n == k)));
    let ok = out.status.success()
        && per_complex.len() >= 2 * RANDOM_COUNT
        && complete
        && cs.iter().all(passed)
        && took < COVER_LIMIT;
    let failed = cs.iter().filter(|c| !passed(c)).count();
    (
        outcome(
            ok,
            format!("{} complexes, {} checks, {failed} failed, {:.2?} (limit {:?})", per_complex.len(), cs.len(), took, COVER_LIMIT),
        ),
        out.stdout,
    )
}

fn lifted_actions() -> Outcome {
    let p2 = Prime::new(2).unwrap();
    let c3 = Arc::new(mpres::io::read_complex(&corpus("three_cycle")).unwrap());
    let cover = build_cover(&c3, p2).unwrap();
    let reflection = GroupAction::new(c3.clone(), 2, vec![vec![0, 2, 1]]).unwrap();
    let commutes = match lift_action(&cover, &reflection) {
        Ok(lifted) => {
            let g = &lifted.generators()[0];
            let t = &cover.deck.generators()[0];
            let gt: Vec<usize> = t.iter().map(|&x| g[x]).collect();
            let tg: Vec<usize> = g.iter().map(|&x| t[x]).collect();
            gt == tg
        }
        Err(_) => false,
    };
    let p3 = Prime::new(3).unwrap();
    let rotation = GroupAction::new(c3.clone(), 3, vec![vec![1, 2, 0]]).unwrap();
    let refused = match lift_action(&build_cover(&c3, p3).unwrap(), &rotation) {
        Err(Error::Hypothesis(m)) => m.contains("no vertex is fixed"),
        _ => false,
    };
    outcome(commutes && refused, format!("lift commutes with deck: {commutes}; rotation refused: {refused}"))
}

fn run_resolve(name: &str, dir: &Path) -> (bool, usize, Vec<Value>) {
    let out = mpres(&["resolve", "--prime", "2", corpus(name).to_str().unwrap(), "-o", dir.to_str().unwrap()]);
    let m = read_json(&dir.join("manifest.json"))["m"].as_u64().unwrap_or(u64::MAX) as usize;
    (out.status.success(), m, checks(&read_json(&dir.join("report.json"))))
}

fn resolutions(dir: &Path) -> Outcome {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut ok = true;
    for (name, want_m, simplices) in [("triangle", 1, 7), ("tetra_boundary", 4, 14)] {
        let (exit_ok, m, cs) = run_resolve(name, &dir.join(name));
        let star: Vec<&Value> = cs.iter().filter(|c| c["name"] == "boundary_inclusion_h1").collect();
        let star_iso = star.len() == simplices && star.iter().all(|c| passed(c) && c["classification"] == "iso");
        let named = |n: &str| cs.iter().any(|c| c["name"] == n) && cs.iter().filter(|c| c["name"] == n).all(passed);
        let skeleton = cs.iter().filter(|c| c["name"] == "skeleton_inclusion_h1").all(|c| c["classification"] == "iso")
            && named("skeleton_inclusion_h1");
        let this = exit_ok && m == want_m && star_iso && skeleton && named("orbit_quotient") && named("fixed_skeleton");
        ok &= this && cs.iter().all(passed);
        notes.push(format!("{name}: m = {m}, {} per-simplex iso", star.len()));
    }
    let took = start.elapsed();
    outcome(ok && took < RESOLVE_LIMIT, format!("{}, {:.2?} (limit {:?})", notes.join("; "), took, RESOLVE_LIMIT))
}

fn tower(dir: &Path) -> Outcome {
    let start = Instant::now();
    let out = mpres(&["tower", "--prime", "2", "--depth", "2", corpus("triangle").to_str().unwrap(), "-o", dir.to_str().unwrap()]);
    let took = start.elapsed();
    let manifest = read_json(&dir.join("manifest.json"));
    let counts: Vec<usize> =
        serde_json::from_value(manifest["stages"][1]["generator_counts"].clone()).unwrap_or_default();
    let cs = checks(&read_json(&dir.join("stage_2/report.json")));
    let named = |n: &str| cs.iter().any(|c| c["name"] == n) && cs.iter().filter(|c| c["name"] == n).all(passed);
    let ok = out.status.success()
        && counts.first() == Some(&1)
        && counts.len() == 2
        && named("boundary_inclusion_h1_mono")
        && named("bonding_commutes")
        && named("orbit_quotient")
        && named("vertex_fibers")
        && named("retriangulation_carriers")
        && cs.iter().all(passed)
        && took < TOWER_LIMIT;
    let mono = cs.iter().filter(|c| c["name"] == "boundary_inclusion_h1_mono").count();
    outcome(
        ok,
        format!("generator counts {counts:?}, {mono} per-simplex checks, {:.2?} (limit {:?})", took, TOWER_LIMIT),
    )
}

fn negative_controls() -> Outcome {
    let tri = corpus("triangle");
    let failing_simplices = |out: &Output, name: &str| -> Vec<String> {
        checks(&json_stdout(out))
            .into_iter()
            .filter(|c| c["name"] == name && !passed(c))
            .map(|c| c["simplex"].to_string())
            .collect()
    };
    let res = mpres(&["resolve", "--unresolved", "--prime", "2", tri.to_str().unwrap()]);
    let tow = mpres(&["tower", "--unresolved", "--prime", "2", "--depth", "1", tri.to_str().unwrap()]);
    let star = failing_simplices(&res, "boundary_inclusion_h1");
    let mono = failing_simplices(&tow, "boundary_inclusion_h1_mono");
    let want = vec!["[0,1,2]".to_string()];
    let bad_prime = mpres(&["cover", "--prime", "4", tri.to_str().unwrap()]);
    let ok = res.status.code() == Some(2)
        && tow.status.code() == Some(2)
        && star == want
        && mono == want
        && bad_prime.status.code() == Some(1)
        && String::from_utf8_lossy(&bad_prime.stderr).contains("4 is not prime");
    outcome(
        ok,
        format!(
            "resolve exit {:?} failing at {star:?}; tower exit {:?} failing at {mono:?}; --prime 4 exit {:?}",
            res.status.code(),
            tow.status.code(),
            bad_prime.status.code()
        ),
    )
}

fn determinism(first: &Path, second: &Path, random_first: &[u8]) -> Outcome {
    let (_, random_second) = random_covers(second);
    resolutions(second);
    tower(&second.join("tower"));
    let a = snapshot(first);
    let b = snapshot(second);
    let differing: Vec<String> =
        a.keys().chain(b.keys()).filter(|k| a.get(*k) != b.get(*k)).map(|k| k.display().to_string()).collect();
    let ok = differing.is_empty() && random_first == random_second.as_slice() && !a.is_empty();
    outcome(ok, format!("{} files compared, {} differ {}", a.len(), differing.len(), differing.join(" ")))
}

fn main() {
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let mut results = Vec::new();
    results.push(("1 homology oracle suite", homology_suite()));
    let (random, random_bytes) = random_covers(first.path());
    results.push(("2 random covers", random));
    results.push(("3 lifted actions", lifted_actions()));
    results.push(("4 resolutions", resolutions(first.path())));
    results.push(("5 depth-2 tower", tower(&first.path().join("tower"))));
    results.push(("6 negative controls", negative_controls()));
    results.push(("7 determinism", determinism(first.path(), second.path(), &random_bytes)));

    let mut failed = 0;
    for (name, o) in &results {
        println!("{} criterion {name}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail.trim_end());
        failed += usize::from(!o.ok);
    }
    println!("{} criteria, {failed} failed", results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
