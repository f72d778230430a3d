use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_str().unwrap().to_string()
}

fn dagger(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dagger"))
        .args(args)
        .env_remove("DAGGER_SEED")
        .env_remove("DAGGER_DEGREE")
        .env_remove("DAGGER_PRIME_BOUND")
        .env_remove("DAGGER_EPS_GRID")
        .output()
        .unwrap()
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn norm_of_one_plus_x() {
    let out = dagger(&["norm", "--series", &data("one_plus_x.json"), "--rho", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["command"], "norm");
    for key in ["S", "T"] {
        assert_eq!(r["report"][key]["lo"], "2/1");
        assert_eq!(r["report"][key]["hi"], "2/1");
    }
}

#[test]
fn norm_over_ring_from_flag() {
    // |3|_3 = 1/3 once the ring is Q_3
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"{"n": 1, "D": 2, "coeffs": [[[2], "3"]]}"#).unwrap();
    let out = dagger(&["norm", "--series", f.to_str().unwrap(), "--rho", "2", "--ring", "padic:3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["report"]["S"]["lo"], "4/3");
}

#[test]
fn unknown_flag_is_an_input_error() {
    let out = dagger(&["norm", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert_eq!(dagger(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(dagger(&["--help"]).status.code(), Some(0));
}

#[test]
fn malformed_json_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    std::fs::write(&f, r#"{"n": 1, "D": 4, "coeffs": [[[0], "1"], [[1], 7]]}"#).unwrap();
    let out = dagger(&["norm", "--series", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("coeffs[1]"), "{err}");

    std::fs::write(&f, r#"{"kind": "laurent", "g": [{"n": 1, "D": 1, "coeffs": [[[1], "1/0"]]}], "s": ["1"]}"#)
        .unwrap();
    let out = dagger(&["koszul", "--algebra", &data("disc_q5.json"), "--spec", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("g[0].coeffs[0]"), "{err}");
}

#[test]
fn missing_file_is_an_input_error() {
    let out = dagger(&["shilov", "--series", "/nonexistent/f.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn koszul_annulus_is_concentrated_in_degree_zero() {
    let out = dagger(&[
        "koszul",
        "--algebra",
        &data("disc_q5.json"),
        "--spec",
        &data("laurent_outer.json"),
        "--degree",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["report"]["result"]["verdict"], "DerivedConcentratedDegree0");
}

#[test]
fn mv_check_rejects_a_non_cover() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("v2.json");
    std::fs::write(&f, r#"{"kind": "laurent", "g": [{"n": 1, "D": 1, "coeffs": [[[1], "1"]]}], "s": ["1"]}"#).unwrap();
    let args = ["mv-check", "--algebra", &data("disc_q.json"), "--v1", &data("weierstrass_half.json"), "--degree", "8"];
    let out = dagger(&[&args[..], &["--v2", f.to_str().unwrap()]].concat());
    assert_eq!(out.status.code(), Some(1));
    let out = dagger(&[&args[..], &["--v2", &data("laurent_outer.json")]].concat());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["report"]["result"]["exact"], true);
}

#[test]
fn shilov_confirms_one_plus_x() {
    let out = dagger(&["shilov", "--series", &data("one_plus_x.json"), "--prime-bound", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["report"]["result"]["archimedean_sup"]["lo"], "2/1");
}

#[test]
fn pi_check_is_seeded() {
    let run = |seed: &str| {
        let out = dagger(&["pi-check", "--module", &data("module_q5.json"), "--samples", "40", "--seed", seed]);
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    assert_eq!(run("3"), run("3"));
    let r: Value = serde_json::from_slice(&run("3")).unwrap();
    assert_eq!(r["report"]["result"]["confirmed"], true);
    assert_eq!(r["report"]["result"]["equal"], 40);
}

#[test]
fn pi_needs_a_non_archimedean_ring() {
    let out = dagger(&["pi-check", "--module", &data("module_z.json"), "--samples", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_out_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = dagger(&[
        "tensor",
        "--flavor",
        "sum",
        "--left",
        &data("module_z.json"),
        "--right",
        &data("module_z.json"),
        "--element",
        &data("tensor_element.json"),
        "--json-out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), out.stdout);
    assert_eq!(report(&out)["report"]["norm"]["lo"], "25/1");
}

#[test]
fn env_sets_the_default_seed() {
    let out = Command::new(env!("CARGO_BIN_EXE_dagger"))
        .args(["norm", "--series", &data("one_plus_x.json")])
        .env("DAGGER_SEED", "99")
        .output()
        .unwrap();
    assert_eq!(report(&out)["seed"], 99);
}
