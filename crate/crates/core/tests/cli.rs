use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cable-curves"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("cable-curves-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn cable_trefoil_with_verification() {
    let out = run(&["cable", "corpus:right-trefoil", "3", "2", "--route", "both", "--verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["report"]["tau"], 4);
    assert_eq!(v["routes_agree"], true);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["cable", "corpus:right-trefoil", "2", "4"]).status.code(), Some(3));
    assert_eq!(run(&["cable", "corpus:right-trefoil", "0", "1"]).status.code(), Some(3));
    let bad = scratch("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "gamma0": 0, "components": [{"word": "a1 a1"}]}"#).unwrap();
    assert_eq!(run(&["invariants", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "not json").unwrap();
    assert_eq!(run(&["parse", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn verification_failure_exits_four() {
    // an empty golden directory makes the determinism criterion fail
    let dir = scratch("empty-golden");
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin().arg("verify-all").env("CABLE_CURVES_GOLDEN_DIR", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v.as_array().unwrap().iter().filter(|r| r["pass"] == false).count(), 1);
}

#[test]
fn files_round_trip_through_parse_and_cable() {
    let path = scratch("trefoil.json");
    let out = run(&["parse", "corpus:right-trefoil"]);
    std::fs::write(&path, &out.stdout).unwrap();
    let again = run(&["parse", path.to_str().unwrap()]);
    assert_eq!(again.stdout, out.stdout);

    let cabled = scratch("cabled.json");
    let out = run(&["cable", path.to_str().unwrap(), "2", "1", "--out", cabled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let inv = json(&run(&["invariants", cabled.to_str().unwrap()]));
    assert_eq!(inv["tau"], 2);
    assert_eq!(inv["phi"]["2"], 1);
}

#[test]
fn check_cable_and_render() {
    let v = json(&run(&["check-cable", "corpus:synthetic-12n242", "--pmax", "4"]));
    assert_eq!(v["p_max"], 3);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["verdict"] == "obstructed"));

    let svg = scratch("t.svg");
    let out = run(&["render", "corpus:right-trefoil", "--view", "tiling", "--cable", "3,2", "--stages", "--out", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let first = std::fs::read(&svg).unwrap();
    run(&["render", "corpus:right-trefoil", "--view", "tiling", "--cable", "3,2", "--stages", "--out", svg.to_str().unwrap()]);
    assert_eq!(std::fs::read(&svg).unwrap(), first);
    assert_eq!(run(&["render", "corpus:unknot", "--view", "tiling", "--out", svg.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn batch_jobs() {
    let jobs = scratch("jobs.txt");
    std::fs::write(&jobs, "# knot p q\ncorpus:right-trefoil 2 1\ncorpus:left-trefoil 3 -2\ncorpus:unknot 2 4\n").unwrap();
    let v = json(&run(&["batch", jobs.to_str().unwrap()]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["report"]["tau"], 2);
    assert_eq!(rows[1]["report"]["tau"], -4);
    assert!(rows[2]["error"].is_string());
}
