use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const HEADER: &str = "person_id,quarter_from,quarter_to,state_from,state_to,age,sex,citizen,region,weight\n";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_labor-flows"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    serde_json::from_str(&ok(&full)).unwrap()
}

/// Pair-rows file; each tuple is (from, to, age, region).
fn toy(dir: &Path, name: &str, rows: &[(&str, &str, u32, &str)]) -> String {
    let mut text = HEADER.to_string();
    for (k, (a, b, age, region)) in rows.iter().enumerate() {
        text.push_str(&format!("p{k},2019.3,2019.4,{a},{b},{age},M,1,{region},1\n"));
    }
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn efpt_years(fixture: &str, from: &str, to: &str) -> f64 {
    let v = json(&["fpt", "--fixture", fixture, "--from", from, "--to", to]);
    v["series"]["efpt_years"].as_f64().unwrap()
}

#[test]
fn fixtures_lists_every_table_block() {
    let out = ok(&["fixtures"]);
    for name in ["early_2019Q2", "early_2019Q3", "early_2020Q2", "early_2020Q3", "late_2019Q2", "late_2020Q3"] {
        assert!(out.contains(&format!("{name},")), "missing {name}");
    }
    let targets = json(&["fixtures", "--targets"]);
    assert_eq!(targets.as_array().unwrap().len(), 20);
}

#[test]
fn fixture_pretty_prints_fallback_row() {
    let out = ok(&["fixtures", "--fixture", "early_2019Q3", "--pretty"]);
    let fs_line = out.lines().find(|l| l.starts_with("FS*")).unwrap();
    assert_eq!(fs_line.matches("0.14").count(), 7);
}

#[test]
fn published_school_to_work_durations() {
    let pe = efpt_years("early_2019Q3", "EDU", "PE");
    assert!((8.63 * 0.8..=8.63 * 1.2).contains(&pe), "EDU->PE {pe}");
    let te = efpt_years("early_2019Q3", "EDU", "TE");
    assert!((3.72 * 0.8..=3.72 * 1.2).contains(&te), "EDU->TE {te}");
}

#[test]
fn geometric_demo_is_one_year() {
    let v = json(&["fpt", "--fixture", "geometric_q025", "--from", "edu", "--to", "pe"]);
    assert!((v["series"]["efpt_years"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(v["linear"]["efpt_years"].as_f64().unwrap(), 1.0);
    assert_eq!(v["diagnostic"]["verdict"], "well_defined");
}

#[test]
fn fpt_csv_and_json_agree() {
    let args = ["fpt", "--fixture", "late_2019Q3", "--from", "U", "--to", "PE", "--horizon", "12"];
    let csv = ok(&args);
    let v = json(&args);
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 12);
    for (k, row) in rows.iter().enumerate() {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells[1], v["distribution"]["f"][k].as_f64().unwrap());
        assert_eq!(cells[2], v["cdf"][k].as_f64().unwrap());
    }
}

#[test]
fn divergent_target_fails_only_under_strict() {
    let args = ["fpt", "--fixture", "early_2019Q3", "--from", "PE", "--to", "FS"];
    let out = run(&args);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("# verdict=divergent\n"));
    assert!(stdout.contains("trapped in recurrent class"));
    let mut strict = args.to_vec();
    strict.push("--strict");
    assert!(!run(&strict).status.success());
}

#[test]
fn simulate_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        ok(&["simulate", "--fixture", "early_2019Q3", "--n", "10", "--seed", "7", "--out", p.to_str().unwrap()]);
    }
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    assert!(bytes.starts_with(HEADER.as_bytes()));
}

#[test]
fn simulate_rejects_zero_individuals() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("x.csv");
    let r = run(&["simulate", "--fixture", "early_2019Q3", "--n", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn simulate_to_unwritable_path_fails() {
    let r = run(&["simulate", "--fixture", "early_2019Q3", "--n", "5", "--out", "/nonexistent/dir/x.csv"]);
    assert!(!r.status.success());
}

#[test]
fn simulated_panel_recovers_fixture() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("sim.csv");
    let p = path.to_str().unwrap();
    ok(&["simulate", "--fixture", "early_2019Q3", "--n", "100000", "--seed", "1", "--out", p]);
    let v = json(&["transitions", "--data", p, "--quarter", "2019.2"]);
    let truth = json(&["fixtures", "--fixture", "early_2019Q3"]);
    for i in 0..7 {
        for j in 0..7 {
            let est = v["entries"][i][j].as_f64().unwrap();
            let t = truth["entries"][i][j].as_f64().unwrap();
            assert!((est - t).abs() <= 0.01, "cell ({i},{j}): {est} vs {t}");
        }
    }
}

#[test]
fn shares_of_toy_cohort() {
    let dir = TempDir::new().unwrap();
    let mut rows = vec![("EDU", "EDU", 22, "NORTH"); 43];
    rows.extend(vec![("TE", "TE", 23, "NORTH"); 57]);
    rows.push(("EDU", "EDU", 31, "NORTH"));
    let p = toy(dir.path(), "toy.csv", &rows);
    let v = json(&["shares", "--data", &p, "--age", "early", "--quarter", "2019.3"]);
    assert_eq!(v["shares"][5]["state"], "EDU");
    assert!((v["shares"][5]["share"].as_f64().unwrap() - 0.43).abs() < 1e-12);
    assert_eq!(v["total"].as_f64().unwrap(), 100.0);

    let all_edu = toy(dir.path(), "edu.csv", &[("EDU", "PE", 20, "NORTH"), ("EDU", "EDU", 25, "NORTH")]);
    let csv = ok(&["shares", "--data", &all_edu, "--quarter", "2019.3"]);
    assert!(csv.contains("\nEDU,1,2\n"));
}

#[test]
fn empty_cohort_is_reported_and_escalated_by_strict() {
    let dir = TempDir::new().unwrap();
    let p = toy(dir.path(), "north.csv", &[("EDU", "EDU", 22, "NORTH")]);
    let out = run(&["shares", "--data", &p, "--region", "SOUTH", "--quarter", "2019.3"]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
    let strict = run(&["shares", "--data", &p, "--region", "SOUTH", "--quarter", "2019.3", "--strict"]);
    assert!(!strict.status.success());
    let transitions = run(&["transitions", "--data", &p, "--region", "SOUTH", "--quarter", "2019.3", "--strict"]);
    assert!(!transitions.status.success());
}

#[test]
fn transitions_of_toy_file() {
    let dir = TempDir::new().unwrap();
    let p = toy(dir.path(), "toy.csv", &[("EDU", "TE", 22, "NORTH"), ("EDU", "EDU", 22, "NORTH")]);
    let out = run(&["transitions", "--data", &p, "--quarter", "2019.3", "--pretty"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let edu = text.lines().find(|l| l.starts_with("EDU")).unwrap();
    assert_eq!(edu.matches("0.50").count(), 2);
    let fs_line = text.lines().find(|l| l.starts_with("FS*")).unwrap();
    assert_eq!(fs_line.matches("0.14").count(), 7);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("row EDU rests on 2 departures"));

    let v = json(&["transitions", "--data", &p, "--quarter", "2019.3"]);
    assert_eq!(v["row_counts"][5].as_f64().unwrap(), 2.0);
    assert_eq!(v["entries"][6][0].as_f64().unwrap(), 1.0 / 7.0);
    assert!(v["fallback_rows"].as_array().unwrap().contains(&Value::from("FS")));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# defaults for this study\nformat = json\nepsilon = 1e-10\n").unwrap();
    let c = cfg.to_str().unwrap();
    let args = ["fixtures", "--fixture", "late_2020Q2", "--config", c];
    assert!(serde_json::from_str::<Value>(&ok(&args)).is_ok());
    let mut csv = args.to_vec();
    csv.extend(["--format", "csv"]);
    assert!(ok(&csv).starts_with("# from_quarter=2020.1\n"));

    fs::write(&cfg, "epsilon = banana\n").unwrap();
    assert!(!run(&args).status.success());
}

#[test]
fn fpt_from_estimated_data() {
    let dir = TempDir::new().unwrap();
    let p = toy(
        dir.path(),
        "chain.csv",
        &[("EDU", "TE", 22, "NORTH"), ("EDU", "EDU", 22, "NORTH"), ("TE", "TE", 22, "NORTH")],
    );
    let v = json(&["fpt", "--data", &p, "--quarter", "2019.3", "--from", "EDU", "--to", "TE"]);
    assert_eq!(v["linear"]["efpt_quarters"].as_f64().unwrap(), 2.0);
    assert!(!run(&["fpt", "--data", &p, "--from", "EDU", "--to", "TE"]).status.success());
}
