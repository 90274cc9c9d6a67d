use std::process::{Command, Output};

use serde_json::Value;

fn subsurf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsurf")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wallTime");
    v
}

#[test]
fn enumerate_counts() {
    let count = |args: &[&str]| String::from_utf8(subsurf(args).stdout).unwrap().trim().to_string();
    assert_eq!(count(&["enumerate", "--N", "4", "--max-chords", "1", "--essential-only", "--count"]), "6");
    assert_eq!(count(&["enumerate", "--N", "2", "--max-chords", "3", "--essential-only", "--count"]), "2");
    let out = subsurf(&["enumerate", "--N", "4", "--max-chords", "0"]);
    assert_eq!(json(&out)["count"], 2);
}

#[test]
fn additivity_passes_over_the_enumeration() {
    let out = subsurf(&["verify", "chi-additivity", "--N", "6", "--max-chords", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["schema"], 1);
    assert_eq!(report["outcome"]["status"], "Pass");
    let count = subsurf(&["enumerate", "--N", "6", "--max-chords", "3", "--count"]);
    let count: u64 = String::from_utf8(count.stdout).unwrap().trim().parse().unwrap();
    assert_eq!(report["instancesChecked"], count);
}

#[test]
fn perturbed_erosion_fails_with_erosion_six() {
    let ok = subsurf(&["verify", "m-erosion-6", "--N", "8", "--max-chords", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    let out = subsurf(&["verify", "m-erosion-6", "--N", "8", "--max-chords", "3", "--perturb", "bound=5"]);
    assert_eq!(out.status.code(), Some(1));
    let detail = &json(&out)["outcome"]["counterexample"]["detail"];
    assert_eq!(detail["lost"].as_u64().unwrap().max(detail["gained"].as_u64().unwrap()), 6);
}

#[test]
fn usage_and_cap_errors_exit_two() {
    assert_eq!(subsurf(&["verify", "no-such-lemma"]).status.code(), Some(2));
    assert_eq!(subsurf(&["verify", "m-erosion-6", "--N", "10"]).status.code(), Some(2));
    assert_eq!(subsurf(&["verify", "chi-additivity", "--N", "12"]).status.code(), Some(2));
    assert_eq!(subsurf(&["verify", "chi-additivity", "--perturb", "bound"]).status.code(), Some(2));
    assert_eq!(subsurf(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(subsurf(&["render", "{not json"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic_across_thread_counts() {
    let args = ["verify", "hat-confluence", "--N", "6", "--max-chords", "3", "--seed", "9"];
    let a = json(&subsurf(&args));
    let b = json(&subsurf(&[&args[..], &["--threads", "1"]].concat()));
    assert_eq!(without_time(a), without_time(b));
    let fuzz = ["verify", "glued-additivity", "--samples", "20", "--max-chords", "2", "--seed", "4"];
    let a = json(&subsurf(&fuzz));
    let b = json(&subsurf(&[&fuzz[..], &["--threads", "1"]].concat()));
    assert_eq!(a["outcome"]["status"], "Pass");
    assert_eq!(without_time(a), without_time(b));
}

#[test]
fn distance_monodromy_render() {
    let s1 = r#"{"N":8,"chords":[[[1,0],[4,0]]],"x1_in":false}"#;
    let out = subsurf(&["distance", s1, s1]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["value"], 0);
    let out = subsurf(&["monodromy", "--p", "2", "--q", "3"]);
    let v = json(&out);
    assert_eq!(v["summary"]["genus"], 1);
    assert_eq!(v["summary"]["euler_characteristic"], -1);
    let dir = std::env::temp_dir().join(format!("subsurf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("s1.svg");
    let out = subsurf(&["render", s1, "--svg", svg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn fuzzing_and_decomposition() {
    let out = subsurf(&["fuzz-paths", "--samples", "3", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let paths = json(&out)["paths"].as_array().unwrap().len();
    assert_eq!(paths, 3);
    let out = subsurf(&["decompose", "--samples", "5", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["paths"].as_array().unwrap().len(), 5);
}
