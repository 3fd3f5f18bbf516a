use std::process::{Command, Output};

use morselab::io::read_profile;
use morselab_core::{DefiningGraph, Presentation};

fn morselab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morselab")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn classify_reports_and_exit_codes() {
    let o = morselab(&["classify", "--graph", "c4", "--subset", "a1,a2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = json(&o);
    assert_eq!(doc["strongly_quasiconvex"], "false");
    assert_eq!(doc["witnesses"]["strongly_quasiconvex"]["partial_four_cycle"].as_array().unwrap().len(), 4);

    let o = morselab(&["classify", "--graph", "c4", "--subset", "a1,b1"]);
    let doc = json(&o);
    assert_eq!((doc["stable"].as_str(), doc["finite"].as_str()), (Some("true"), Some("true")));

    let dir = tempfile::tempdir().unwrap();
    let triangle = dir.path().join("triangle.json");
    std::fs::write(&triangle, r#"{"vertices":["a","b","c"],"edges":[["a","b"],["b","c"],["c","a"]]}"#).unwrap();
    let o = morselab(&["classify", "--graph", triangle.to_str().unwrap(), "--subset", "a"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["stable"], "outside_scope");

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"vertices\": [").unwrap();
    let o = morselab(&["classify", "--graph", broken.to_str().unwrap(), "--subset", "a"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("parse error"));

    let o = morselab(&["classify", "--graph", "c4", "--subset", "zz"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sigma_csv_respects_the_witness_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sigma.csv");
    let o = morselab(&[
        "divergence", "sigma", "--graph", "c4", "--kind", "racg", "--subset", "a1,a2", "--n", "2", "--rho", "1",
        "--r", "2..3", "--rmax", "14", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("summary: rows=2"));
    let p = Presentation::racg(DefiningGraph::c4());
    let profile = read_profile(std::fs::File::open(&out).unwrap(), &p).unwrap();
    let r3 = profile.rows.iter().find(|row| row.r == 3).unwrap();
    // (4n+2)r at n = 2, r = 3
    assert!(r3.value.unwrap() <= 30);
}

#[test]
fn geodesic_summary_reports_superlinear_growth() {
    let o = morselab(&["divergence", "geodesic", "--graph", "gamma_d:2", "--period", "a2,b2", "--r", "2..5", "--rmax", "12"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stderr(&o).contains("superlinear=true"), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2 + 4);
}

#[test]
fn ldiv_rows_never_exceed_div() {
    let args = |cmd: &'static str| ["divergence", cmd, "--graph", "gamma_d:2", "--period", "a2 b2", "--r", "2..4", "--rmax", "9"];
    let p = Presentation::racg(DefiningGraph::gamma_d(2).unwrap());
    let div = read_profile(morselab(&args("geodesic")).stdout.as_slice(), &p).unwrap();
    let ldiv = read_profile(morselab(&args("ldiv")).stdout.as_slice(), &p).unwrap();
    for (d, l) in div.rows.iter().zip(&ldiv.rows) {
        assert!(l.value.unwrap() <= d.value.unwrap());
    }
}

#[test]
fn oversized_balls_exit_with_budget_code() {
    let o = morselab(&[
        "divergence", "sigma", "--graph", "p4", "--kind", "raag", "--gens", "a d a,d a d", "--n", "9", "--rho", "1",
        "--r", "3..4", "--rmax", "40",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("at layer"), "{}", stderr(&o));
}

#[test]
fn distance_and_reduce() {
    let o = morselab(&["distance", "--graph", "c4", "--word", "b1 b2 b1 b2", "--subset", "a1,a2"]);
    assert_eq!(stdout(&o).trim(), "4");
    let o = morselab(&["distance", "--graph", "p4", "--kind", "raag", "--word", "a d a", "--to", "d a d"]);
    assert_eq!(stdout(&o).trim(), "6");
    let o = morselab(&[
        "distance", "--graph", "p4", "--kind", "raag", "--word", "a d a d a d", "--gens", "a d a,d a d", "--rmax", "8",
    ]);
    assert_eq!(stdout(&o).trim(), "0", "{}", stderr(&o));

    let o = morselab(&["reduce", "--graph", "p4", "--kind", "raag", "--word", "b a b^-1 c"]);
    let doc = json(&o);
    assert_eq!(doc["normal_form"], "a c");
    assert_eq!(doc["loxodromic"], false);
    let o = morselab(&["reduce", "--graph", "p4", "--kind", "raag", "--word", "a d"]);
    assert_eq!(json(&o)["loxodromic"], true);
}

#[test]
fn witness_commands() {
    let o = morselab(&["witness", "four-cycle", "--graph", "c4", "--subset", "a1,a2", "--n", "2", "--r", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = json(&o);
    assert!(doc["length"].as_u64().unwrap() <= doc["bound"].as_u64().unwrap());
    assert_eq!(doc["path"].as_array().unwrap().len() as u64, doc["length"].as_u64().unwrap() + 1);
    let o = morselab(&["witness", "four-cycle", "--graph", "c4", "--subset", "a1,b1", "--r", "2"]);
    assert_eq!(o.status.code(), Some(1));

    let o = morselab(&["witness", "morse-boundary", "--graph", "cycle:5"]);
    assert_eq!(json(&o)["cycle"].as_array().unwrap().len(), 5);
    let o = morselab(&["witness", "morse-boundary", "--graph", "c4"]);
    assert!(json(&o)["cycle"].is_null());
}

#[test]
fn recipe_names_and_budget_guidance() {
    let o = morselab(&["recipe", "E0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("E1, E2, E3, E4, E5"), "{}", stderr(&o));

    let o = morselab(&["recipe", "E1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().last().unwrap().starts_with("PASS E1"));

    let o = morselab(&["recipe", "E3", "--rmax", "10"]);
    assert_ne!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FAIL E3.sigma"));

    let o = morselab(&["recipe", "E3", "--rmax", "12", "--budget", "1000"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("--rmax or raise --budget"));
}

#[test]
fn cached_balls_give_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_morselab"))
            .args(["divergence", "geodesic", "--graph", "gamma_d:2", "--period", "a2,b2", "--r", "2..4", "--rmax", "8"])
            .env("MORSELAB_CACHE_DIR", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(first.status.code(), Some(0));
}
