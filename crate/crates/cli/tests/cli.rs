use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use strata_core::exact_arith::rat;
use strata_core::volumes::volume_value;
use strata_core::{PiValue, Stratum};

fn mvvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvvol"))
        .env_remove("MV_CACHE")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn volume_formats() {
    let o = mvvol(&["volume", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "1/120 * pi^4\n");
    let o = mvvol(&["volume", "1,1", "--format", "decimal", "--digits", "10"]);
    assert_eq!(stdout(&o), "0.7215488225\n");
    let o = mvvol(&["--format", "decimal", "volume", "H(2)"]);
    assert_eq!(stdout(&o).trim().len(), "0.".len() + 50);
}

#[test]
fn json_matches_in_memory_value() {
    for spec in ["2", "1,1", "3,1", "2,1,1"] {
        let o = mvvol(&["volume", spec, "--format", "json"]);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let q = rat(
            v["num"].as_str().unwrap().parse().unwrap(),
            v["den"].as_str().unwrap().parse().unwrap(),
        );
        let parsed = PiValue::monomial(q, v["pi_exp"].as_i64().unwrap());
        let s: Stratum = spec.parse().unwrap();
        assert_eq!(parsed, volume_value(&s).unwrap(), "{spec}");
        assert!(v["relative_error"].as_str().unwrap().starts_with('-'));
    }
}

#[test]
fn exit_codes() {
    assert_eq!(mvvol(&["volume", "3"]).status.code(), Some(2));
    assert_eq!(mvvol(&["volume", "1,a"]).status.code(), Some(2));
    assert_eq!(mvvol(&["volume", "1,1,1,1,1,1,1,1"]).status.code(), Some(3));
    assert_eq!(
        mvvol(&["volume", "1,1,1,1", "--max-weight", "6"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        mvvol(&["volume", "2", "--digits", "91"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mvvol(&["volume", "2", "--threads", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        mvvol(&["sv", "1,1", "--kind", "sc", "--zeros", "1,3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        mvvol(&["sv", "1,1", "--kind", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(mvvol(&["principal", "1"]).status.code(), Some(2));
    assert_eq!(mvvol(&["bogus"]).status.code(), Some(2));
}

#[test]
fn principal_verify() {
    let o = mvvol(&["principal", "3", "--verify"]);
    assert_eq!(stdout(&o), "1/4860 * pi^6\nmatches general pipeline: yes\n");
}

#[test]
fn sv_output() {
    let out = stdout(&mvvol(&["sv", "1,1", "--kind", "cyl1"]));
    assert!(out.contains("value: 15 * pi^-2\n"), "{out}");
    assert!(out.contains("predictor: 4/3\n"));
    let out = stdout(&mvvol(&["sv", "4", "--kind", "handle", "--zeros", "1"]));
    assert!(
        out.contains("warning: H(4) has several connected components"),
        "{out}"
    );
    let out = stdout(&mvvol(&[
        "sv", "1,1,1,1", "--kind", "sc2", "--format", "json",
    ]));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"]["pi_exp"], 0);
    assert_eq!(v["kind"], "sc2");
}

fn cached(args: &[&str], path: &Path) -> String {
    let mut full = args.to_vec();
    full.extend(["--cache", path.to_str().unwrap()]);
    let o = mvvol(&full);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    stdout(&o)
}

#[test]
fn cache_round_trip_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    let cold = cached(&["table", "--max-size", "4"], &path);
    let first = fs::read_to_string(&path).unwrap();
    let warm = cached(&["table", "--max-size", "4"], &path);
    let second = fs::read_to_string(&path).unwrap();
    assert_eq!(cold, warm);
    assert_eq!(first, second);
    let doc: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(doc["version"], 1);
    assert_eq!(doc["entries"]["1,1"]["den"], "135");
    let keys: Vec<&String> = doc["entries"].as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn corrupt_cache_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.json");
    fs::write(
        &path,
        r#"{"version":1,"entries":{"2":{"num":"1","den":"120","pi_exp":6}}}"#,
    )
    .unwrap();
    let o = mvvol(&["volume", "2", "--cache", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    fs::write(&path, "not json").unwrap();
    let o = mvvol(&["volume", "2", "--cache", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn environment_overrides_flag() {
    let dir = tempfile::tempdir().unwrap();
    let env_path = dir.path().join("env.json");
    let flag_path = dir.path().join("flag.json");
    let o = Command::new(env!("CARGO_BIN_EXE_mvvol"))
        .env("MV_CACHE", &env_path)
        .args(["volume", "2", "--cache", flag_path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(env_path.exists());
    assert!(!flag_path.exists());
}

#[test]
fn output_independent_of_threads() {
    let a = stdout(&mvvol(&["table", "--max-size", "6", "--threads", "1"]));
    let b = stdout(&mvvol(&["table", "--max-size", "6", "--threads", "3"]));
    assert_eq!(a, b);
    assert!(a.contains("genus 4: smallest |relative error| at H(1,1,1,1,1,1), largest at H(6)"));
}
