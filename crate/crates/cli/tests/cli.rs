use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.json")).display().to_string()
}

fn mpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpres")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn homology_prints_rank() {
    let o = mpres(&["homology", "--prime", "2", "--dim", "1", "--report", "text", &corpus("torus7")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "rank 2");
    let o = mpres(&["homology", "--prime", "3", &corpus("rp2")]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["betti"], serde_json::json!([1, 0, 0]));
}

#[test]
fn bad_input_exits_one() {
    let o = mpres(&["cover", "--prime", "4", &corpus("theta")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("4 is not prime"));
    assert_eq!(mpres(&["homology", "--prime", "2", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(mpres(&["frobnicate"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_mpres"))
        .env("MPRES_THREADS", "many")
        .args(["homology", "--prime", "2", &corpus("triangle")])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn resolve_writes_a_verifiable_stage() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = mpres(&["resolve", "--prime", "2", &corpus("triangle"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = mpres(&["verify", "--report", "text", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));

    // a tampered orbit map is caught on re-verification
    let path = out.join("orbit_map.json");
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let map = v["vertex_map"].as_array_mut().unwrap();
    map.swap(0, 1);
    fs::write(&path, v.to_string()).unwrap();
    assert_ne!(mpres(&["verify", out.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn cover_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c");
    let o = mpres(&["cover", "--prime", "3", &corpus("torus7"), "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("cover.json")).unwrap()).unwrap();
    assert_eq!(meta["l"], 2);
    assert_eq!(meta["projection"].as_array().unwrap().len(), 63);
    assert_eq!(mpres(&["verify", out.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn subdivide_and_pullback() {
    let dir = tempfile::tempdir().unwrap();
    let sd = dir.path().join("sd");
    let o = mpres(&["subdivide", "--report", "text", &corpus("triangle"), "-o", sd.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "f-vector [7, 12, 6]");
    let st = dir.path().join("st");
    let o = mpres(&["subdivide", "--star", "0,1", "--report", "text", &corpus("triangle"), "-o", st.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "f-vector [4, 5, 2]");
    assert_eq!(mpres(&["subdivide", "--star", "0,5", &corpus("triangle"), "-o", st.to_str().unwrap()]).status.code(), Some(1));

    // two edges over a point
    fs::write(dir.path().join("edge.json"), r#"{"name":"edge","maximal_simplices":[[0,1]]}"#).unwrap();
    fs::write(dir.path().join("point.json"), r#"{"name":"point","maximal_simplices":[[0]]}"#).unwrap();
    fs::write(dir.path().join("c.json"), r#"{"domain":"edge.json","codomain":"point.json","vertex_map":[0,0]}"#).unwrap();
    let c = dir.path().join("c.json");
    let pb = dir.path().join("pb");
    let o = mpres(&["pullback", "--report", "text", c.to_str().unwrap(), c.to_str().unwrap(), "-o", pb.to_str().unwrap()]);
    assert_eq!(stdout(&o).trim(), "f-vector [4, 5, 2]");
    assert!(pb.join("to_left.json").exists());
}

#[test]
fn thread_cap_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_mpres"))
            .env("MPRES_THREADS", threads)
            .args(["resolve", "--prime", "2", &corpus("tetra_boundary")])
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("4");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
