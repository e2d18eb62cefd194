use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn gallery(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../gallery").join(name).display().to_string()
}

fn polycube(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polycube")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_name(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn permutation_of_the_l_solid() {
    let v = report(&polycube(&["permutation", "--manifest", &gallery("l_solid.json")]));
    assert_eq!(v["result"]["cycles"], serde_json::json!([[3, 1, 2]]));
    assert_eq!(v["result"]["cycle_strings"][0], "3→1→2→3");
    assert_eq!(v["result"]["exceeds_half"], true);
    assert_eq!(v["manifest"]["sha256"].as_str().unwrap().len(), 64);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn unpaired_face_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name":"bad","cubes":[[0,0,0]],"street_wrap":false}"#).unwrap();
    let out = polycube(&["validate", "--manifest", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_name(&out), "UnpairedFace");
}

#[test]
fn singular_orbit_exit_code() {
    let out = polycube(&["trace", "--manifest", &gallery("l_solid.json"), "--face", "1", "--x", "0.3819660112501051", "--z", "0.5"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_name(&out), "SingularHit");
    // the report is still written
    assert_eq!(serde_json::from_slice::<Value>(&out.stdout).unwrap()["result"]["terminated_by"], "singular");
}

#[test]
fn usage_errors() {
    assert_eq!(polycube(&["nonsense"]).status.code(), Some(1));
    let out = polycube(&["permutation", "--manifest", &gallery("l_solid.json"), "--alpha", "[0;x]"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn three_distance_gap_report() {
    let v = report(&polycube(&["lemmas", "--suite", "three-distance", "--alpha", "golden", "--k", "2"]));
    let gaps: Vec<&str> = v["result"]["three_distance"]["gaps"].as_array().unwrap().iter().map(|g| g["summary"].as_str().unwrap()).collect();
    assert_eq!(gaps, ["0.2360×1", "0.3819×2"]);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let args = ["discrepancy", "--manifest", &gallery("l_solid.json"), "--steps", "20000", "--grid", "4", "--seed", "11"];
    let a = polycube(&args);
    let b = polycube(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut with_csv = args.to_vec();
    with_csv.extend(["--csv", csv.to_str().unwrap()]);
    report(&polycube(&with_csv));
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("N,discrepancy\n10000,"));
    let other = polycube(&["discrepancy", "--manifest", &gallery("l_solid.json"), "--steps", "20000", "--grid", "4", "--seed", "12"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn census_and_trace_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("census.json");
    let v = report(&polycube(&["census", "--manifest", &gallery("l_solid.json"), "--k", "3", "--out", out.to_str().unwrap()]));
    assert!(v["result"]["forward"]["inequality_holds"].as_bool().unwrap());
    assert_eq!(std::fs::read(&out).unwrap(), polycube(&["census", "--manifest", &gallery("l_solid.json"), "--k", "3"]).stdout);
    let csv = dir.path().join("trace.csv");
    let t = report(&polycube(&["trace", "--manifest", &gallery("torus.json"), "--steps", "300", "--csv", csv.to_str().unwrap()]));
    assert!(t["result"]["shift_deviation"].as_f64().unwrap() < 1e-9);
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 301);
}

#[test]
fn gallery_regenerates() {
    let dir = tempfile::tempdir().unwrap();
    let v = report(&polycube(&["gallery", "--dir", dir.path().to_str().unwrap()]));
    for e in v["result"]["entries"].as_array().unwrap() {
        if let Some(m) = e.get("matches_published") {
            assert_eq!(m, true, "{}", e["key"]);
        }
    }
    assert!(v["result"]["criterion"].as_array().unwrap().iter().all(|c| c["agree"] == true));
    let shipped = std::fs::read_to_string(gallery("l_solid.json")).unwrap();
    assert_eq!(std::fs::read_to_string(dir.path().join("l_solid.json")).unwrap(), shipped);
}
