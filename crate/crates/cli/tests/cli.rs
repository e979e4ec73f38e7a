use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn katolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_katolab")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

/// Header row and data rows of a CSV report, metadata lines dropped.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().expect("header").split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn projection_table_smallest() {
    let out = katolab(&["projections", "verify", "--max-n", "2", "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# katolab "));
    assert!(text.contains("seed=0 tolerance=1e-10"));
    let (header, rows) = csv_rows(&text);
    assert_eq!(header[0], "constructor");
    assert_eq!(rows.len(), 8);
    let names: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    for c in ["exterior", "interior", "symmetrization", "contraction", "clifford", "twistor"] {
        assert!(names.contains(&c), "{c}");
    }
    assert!(rows.iter().all(|r| r.last().unwrap() == "true"));
}

#[test]
fn projection_exit_codes() {
    assert_eq!(code(&katolab(&["projections", "verify", "--max-n", "2", "--tolerance", "1e-20"])), 1);
    assert_eq!(code(&katolab(&["projections", "verify", "--max-n", "1"])), 2);
    let too_big = katolab(&["projections", "verify", "--max-n", "9"]);
    assert_eq!(code(&too_big), 2);
    assert!(String::from_utf8_lossy(&too_big.stderr).contains("max-n"));
    assert_eq!(code(&katolab(&["projections", "verify", "--tolerance", "-1"])), 2);
}

#[test]
fn projection_json_header() {
    let out = katolab(&["projections", "verify", "--max-n", "3", "--seed", "4"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["tool"], "katolab");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["seed"], 4);
    assert_eq!(v["passed"], true);
    let rows = v["result"]["rows"].as_array().unwrap();
    let twistor: Vec<&Value> = rows.iter().filter(|r| r["constructor"] == "twistor").collect();
    assert_eq!(twistor.len(), 2);
    assert!((twistor[1]["twistor_symbol"]["expected"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn ellipticity_values() {
    let out = katolab(&["ellipticity", "--op", "twistor:3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["result"]["epsilon"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-9);
    assert!((v["target_constant"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);

    let out = katolab(&["ellipticity", "--op", "exterior-only:4:2", "--twist", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["result"]["elliptic"], false);

    let out = katolab(&["ellipticity", "--op", "hodge:5:2", "--format", "csv"]);
    let (_, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows[0][0], "hodge:5:2");

    let bad = katolab(&["ellipticity", "--op", "laplace:3"]);
    assert_eq!(code(&bad), 2);
    assert_eq!(code(&katolab(&["ellipticity"])), 2);
    assert_eq!(code(&katolab(&["ellipticity", "--op", "hodge:3:3"])), 2);
}

#[test]
fn fuzz_verdict_csv() {
    let args =
        ["kato", "fuzz", "--theorem", "foldo", "--op", "dirac:3", "--samples", "50", "--seed", "3", "--format", "csv"];
    let out = katolab(&args);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let (header, rows) = csv_rows(&text);
    assert_eq!(header, ["theorem", "branch", "c", "c_star", "lhs", "rhs", "margin", "seed"]);
    assert_eq!(rows.len(), 100);
    assert!(rows.iter().all(|r| r[7] == "3"));
    assert!(rows.iter().all(|r| r[6].parse::<f64>().unwrap() >= -1e-9 * r[4].parse::<f64>().unwrap().max(1.0)));
    assert!(text.contains("target_constant=1.5"));

    let again = katolab(&args);
    assert_eq!(text.as_bytes(), again.stdout.as_slice());
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(text.as_bytes(), katolab(&seq).stdout.as_slice());
}

#[test]
fn fuzz_targets_and_errors() {
    let out =
        katolab(&["kato", "fuzz", "--theorem", "hodge", "--op", "hodge:4:2", "--fiber-dim", "2", "--samples", "500"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["target"], "hodge:4:2:E2");
    assert!((v["target_constant"].as_f64().unwrap() - 1.5).abs() < 1e-15);
    assert_eq!(v["result"]["checks"].as_array().unwrap().len(), 5);

    let out = katolab(&[
        "kato",
        "fuzz",
        "--theorem",
        "key-lemma",
        "--geometry",
        "interior",
        "--n",
        "5",
        "--k",
        "2",
        "--samples",
        "300",
    ]);
    assert_eq!(code(&out), 0);
    assert!((json(&out)["target_constant"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-9);

    assert_eq!(code(&katolab(&["kato", "fuzz", "--theorem", "foldo", "--op", "dirac:3", "--samples", "0"])), 2);
    assert_eq!(code(&katolab(&["kato", "fuzz", "--theorem", "hodge"])), 2);
    assert_eq!(code(&katolab(&["kato", "fuzz", "--theorem", "key-lemma", "--op", "connection:3"])), 2);
    assert_eq!(code(&katolab(&["kato", "fuzz", "--theorem", "foldo", "--op", "dirac:3", "--c", "-1"])), 2);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# twistor run\ntheorem = foldo\nop = twistor:3\nsamples = 200\nseed = 11\n").unwrap();
    let cfg_arg = cfg.to_str().unwrap();

    let v = json(&katolab(&["kato", "fuzz", "--config", cfg_arg]));
    assert_eq!(v["seed"], 11);
    assert_eq!(v["result"]["samples"], 200);
    let v = json(&katolab(&["kato", "fuzz", "--config", cfg_arg, "--seed", "12", "--samples", "30"]));
    assert_eq!(v["seed"], 12);
    assert_eq!(v["result"]["samples"], 30);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let out = katolab(&["kato", "fuzz", "--config", cfg_arg]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    assert_eq!(code(&katolab(&["kato", "fuzz", "--config", "/nonexistent/x.cfg"])), 2);
}

#[test]
fn field_run_with_points() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.csv");
    let report = dir.path().join("report.json");
    let out = katolab(&[
        "field",
        "run",
        "--scenario",
        "dirac-spinor",
        "--n",
        "3",
        "--grid",
        "5",
        "--points-csv",
        points.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // Nonvanishing branch at c = 1: 1 + c/(1 + (n-1)c).
    assert!((v["target_constant"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(v["result"]["violations"], 0);
    assert!(v["result"].get("points").is_none());
    let (header, rows) = csv_rows(&std::fs::read_to_string(Path::new(&points)).unwrap());
    assert_eq!(header, ["x1", "x2", "x3", "lhs", "rhs", "margin"]);
    assert_eq!(rows.len() + v["result"]["skipped"].as_u64().unwrap() as usize, 125);
}

#[test]
fn field_scenarios_and_errors() {
    let out = katolab(&[
        "field",
        "run",
        "--scenario",
        "closed-form",
        "--n",
        "4",
        "--k",
        "2",
        "--grid",
        "4",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&out), 0);
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header[0], "scenario");
    assert_eq!(rows.len(), 5);
    assert_eq!(code(&katolab(&["field", "run", "--scenario", "instanton-Fplus", "--n", "3"])), 2);
    assert_eq!(code(&katolab(&["field", "run", "--scenario", "maxwell", "--n", "3"])), 2);
    assert_eq!(code(&katolab(&["field", "run", "--scenario", "higgs-dPhi"])), 2);
}

#[test]
fn suite_small() {
    let out = katolab(&["suite", "all", "--max-n", "3", "--samples", "200", "--grid", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    assert_eq!(v["result"]["failed"], 0);
    let entries = v["result"]["entries"].as_array().unwrap();
    for section in ["projections", "ellipticity", "kato", "field"] {
        assert!(entries.iter().any(|e| e["section"] == section), "{section}");
    }
    assert_eq!(
        code(&katolab(&["suite", "all", "--max-n", "3", "--samples", "50", "--grid", "2", "--tolerance", "1e-30"])),
        1
    );
}

#[test]
fn verdict_lines_and_first_failure() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("v.jsonl");
    let out = katolab(&[
        "kato",
        "fuzz",
        "--theorem",
        "foldo",
        "--op",
        "twistor:3",
        "--samples",
        "7",
        "--verdicts-jsonl",
        lines.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["result"].get("verdicts").is_none());
    let text = std::fs::read_to_string(&lines).unwrap();
    assert_eq!(text.lines().count(), 14);
    for l in text.lines() {
        let v: Value = serde_json::from_str(l).unwrap();
        assert!(v["margin"].is_number());
    }

    let out = katolab(&["projections", "verify", "--max-n", "2", "--tolerance", "1e-20"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("first failure: "));
}

#[test]
fn closed_form_side_constants() {
    let out = katolab(&["field", "run", "--scenario", "closed-form", "--n", "3", "--k", "1", "--grid", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let used = &v["result"]["constants_used"];
    // dφ = 0 on this field, so the d side is 1/k; the d* side is c*/(1 + 2c*) at c* = 1.
    assert_eq!(used["ctilde_d"].as_f64(), Some(1.0));
    assert!((used["ctilde_dstar"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((v["target_constant"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);
}
