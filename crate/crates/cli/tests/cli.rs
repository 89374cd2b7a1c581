/*
Copyright 2026 The spca Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


use proptest::prelude::*;
use serde_json::Value;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn spca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spca"))
        .args(args)
        .output()
        .expect("spawn spca")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn support(c: &Value) -> Vec<u64> {
    c["support"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect()
}

fn validator() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/schema/result.schema.json");
    let schema: Value = serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &Value) {
    let val = validator();
    let errors: Vec<String> = val.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "schema violations: {errors:?}\n{v:#}");
}

#[test]
fn zou_solve_selects_the_second_block() {
    let o = spca(&["solve", "--builtin", "zou", "--k", "4", "--mu0", "0.8"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let c = &v["component"];
    assert_eq!(c["cardinality"], 4);
    assert_eq!(support(c), vec![5, 6, 7, 8]);
    assert_eq!(c["converged"], true);
    for (i, x) in c["loading"].as_array().unwrap().iter().enumerate() {
        let want = if (4..8).contains(&i) { 0.5 } else { 0.0 };
        assert!((x.as_f64().unwrap() - want).abs() < 0.01, "entry {i}: {x}");
    }
}

#[test]
fn zou_covariance_from_a_synth_file_gives_the_same_support() {
    let dir = TempDir::new().unwrap();
    let cov = dir.path().join("zou.csv");
    let o = spca(&["synth", "--model", "zou", "--output", s(&cov)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = spca(&["solve", "--input", s(&cov), "--k", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(support(&json(&o)["component"]), vec![5, 6, 7, 8]);
}

#[test]
fn zou_multi_recovers_both_blocks() {
    let o = spca(&["multi", "--builtin", "zou", "--k", "4,4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = json(&o);
    let comps = v["components"].as_array().unwrap();
    assert_eq!(support(&comps[0]), vec![5, 6, 7, 8]);
    assert_eq!(support(&comps[1]), vec![1, 2, 3, 4]);
    let adj = v["totals"]["adjusted_variance_pct"].as_f64().unwrap();
    assert!((adj - 80.41).abs() < 0.5, "adjusted variance {adj}");
    assert_eq!(v["totals"]["cardinality"], 8);
}

#[test]
fn malformed_csv_exits_1_and_names_the_line() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.csv", "1,0,0\n0,1,oops\n0,0,1\n");
    let o = spca(&["solve", "--input", s(&bad), "--k", "1"]);
    assert_eq!(code(&o), 1);
    let err = stderr(&o);
    assert!(err.contains("line 2"), "{err}");
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_file_and_bad_parameters_exit_1() {
    assert_eq!(code(&spca(&["solve", "--input", "/nonexistent/x.csv", "--k", "1"])), 1);
    assert_eq!(code(&spca(&["solve", "--builtin", "zou", "--k", "-1"])), 1);
    assert_eq!(code(&spca(&["solve", "--builtin", "zou"])), 1);
    assert_eq!(code(&spca(&["solve", "--builtin", "zou", "--k", "4", "--mu0", "0"])), 1);
    assert_eq!(code(&spca(&["solve", "--builtin", "zou", "--k", "4,4"])), 1);
    assert_eq!(code(&spca(&["solve", "--builtin", "zou", "--k", "4", "--bogus"])), 1);
    assert_eq!(code(&spca(&["--help"])), 0);
}

#[test]
fn loose_tolerance_converges_quickly() {
    for args in [
        vec!["solve", "--builtin", "zou", "--k", "4"],
        vec!["solve", "--builtin", "pitprops", "--k", "3"],
        vec!["solve", "--builtin", "zou", "--formulation", "penalized", "--rho", "50"],
    ] {
        let iters = |tol: &str| {
            let mut a = args.clone();
            a.extend(["--tol", tol]);
            let o = spca(&a);
            assert_eq!(code(&o), 0, "{a:?}: {}", stderr(&o));
            let c = &json(&o)["component"];
            assert_eq!(c["converged"], true);
            c["iterations"].as_u64().unwrap()
        };
        let (loose, tight) = (iters("1e-1"), iters("1e-4"));
        assert!(loose < tight, "{args:?}: {loose} vs {tight}");
    }
}

#[test]
fn iteration_cap_exits_2_and_still_writes_the_result() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = spca(&["solve", "--builtin", "zou", "--k", "4", "--max-iters", "10", "--output", s(&out)]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["component"]["converged"], false);
    assert_eq!(v["component"]["iterations"], 10);
    assert_valid(&v);

    let o = spca(&["multi", "--builtin", "zou", "--k", "4,4", "--max-iters", "10", "--format", "csv"]);
    assert_eq!(code(&o), 2);
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn multi_with_one_component_is_a_single_row_table() {
    let o = spca(&["multi", "--builtin", "zou", "--k", "4", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "pc,card,pev_pct,iters,seconds");
    assert_eq!(lines.len(), 3, "{text}");
    assert!(lines[1].starts_with("1,4,"));
    assert!(lines[2].starts_with("total,4,"));
}

#[test]
fn totals_row_aggregates_the_columns() {
    let o = spca(&["multi", "--builtin", "pitprops", "--k", "6,2,2,1,1,1", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let (pcs, total) = rows.split_at(rows.len() - 1);
    assert_eq!(pcs.len(), 6);
    let sum = |col: usize| pcs.iter().map(|r| r[col].parse::<f64>().unwrap()).sum::<f64>();
    assert_eq!(sum(1), total[0][1].parse::<f64>().unwrap());
    assert_eq!(sum(3), total[0][3].parse::<f64>().unwrap());
    assert!((sum(4) - total[0][4].parse::<f64>().unwrap()).abs() <= 0.004);
}

#[test]
fn no_timestamp_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let runs: [&[&str]; 3] = [
        &["solve", "--builtin", "zou", "--k", "4"],
        &["multi", "--builtin", "pitprops", "--k", "6,2", "--format", "csv"],
        &["bench", "--p", "30", "--s", "5", "--noise", "0.01", "--k", "3", "--seeds", "3"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut files = Vec::new();
        for rep in 0..2 {
            let out = dir.path().join(format!("{i}-{rep}"));
            let mut a = args.to_vec();
            a.extend(["--no-timestamp", "--output", s(&out)]);
            let o = spca(&a);
            assert_eq!(code(&o), 0, "{a:?}: {}", stderr(&o));
            files.push(fs::read(&out).unwrap());
        }
        assert_eq!(files[0], files[1], "{args:?}");
        let text = String::from_utf8(files[0].clone()).unwrap();
        assert!(!text.contains("timestamp"), "{text}");
    }
    let v = json(&spca(&["solve", "--builtin", "zou", "--k", "4"]));
    assert!(v["timestamp"].is_string());
    assert!(v["component"]["seconds"].is_number());
}

#[test]
fn json_outputs_match_the_schema() {
    let docs = [
        json(&spca(&["solve", "--builtin", "zou", "--k", "4"])),
        json(&spca(&["solve", "--builtin", "zou", "--k", "4", "--no-timestamp"])),
        json(&spca(&["solve", "--builtin", "zou", "--formulation", "penalized", "--rho", "50", "--cont-factor", "0.5"])),
        json(&spca(&["multi", "--builtin", "zou", "--k", "4,4", "--deflation", "hotelling"])),
        json(&spca(&["bench", "--p", "20", "--s", "4", "--noise", "0.01", "--k", "2", "--seeds", "2"])),
        json(&spca(&["bench", "--p", "5", "--s", "9", "--noise", "0", "--k", "2", "--seeds", "2"])),
        json(&spca(&["bench", "--no-timestamp"])),
    ];
    for d in &docs {
        assert_valid(d);
    }
}

#[test]
fn schema_rejects_malformed_documents() {
    let val = validator();
    let good = json(&spca(&["solve", "--builtin", "zou", "--k", "4"]));
    assert!(val.is_valid(&good));
    let mut missing = good.clone();
    missing.as_object_mut().unwrap().remove("component");
    assert!(!val.is_valid(&missing));
    let mut zero_based = good.clone();
    zero_based["component"]["support"] = serde_json::json!([0, 1]);
    assert!(!val.is_valid(&zero_based));
    let mut wrong_kind = good;
    wrong_kind["command"] = Value::from("fit");
    assert!(!val.is_valid(&wrong_kind));
}

#[test]
fn identity_basis_returns_the_first_two_coordinates() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.csv", "1.5,-2,0\n3,4,-0.25\n7,8,9\n");
    let o = spca(&["project2d", "--input", s(&data), "--input-kind", "data", "--basis", "identity"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "id,alpha,beta,label\n1,1.5,3,\n2,-2,4,\n3,0,-0.25,\n");
}

#[test]
fn project2d_passes_labels_through() {
    let dir = TempDir::new().unwrap();
    let votes = write(&dir, "v.csv", "Ann (R-AK),Bo (D-CA),Cy (I-VT)\n1,-1,1\n0,1,-1\n1,1,0\n");
    let o = spca(&[
        "project2d", "--input", s(&votes), "--input-kind", "votes", "--labeled", "--basis", "pca",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    let labels: Vec<&str> = text.lines().skip(1).map(|l| l.rsplit(',').next().unwrap()).collect();
    assert_eq!(labels, ["Ann (R-AK)", "Bo (D-CA)", "Cy (I-VT)"]);
}

#[test]
fn admm_basis_projects_every_column() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.csv", "1,2,3,4\n2,1,0,1\n0,0,1,5\n3,1,1,1\n");
    let o = spca(&[
        "project2d", "--input", s(&data), "--input-kind", "data", "--basis", "admm", "--k", "2,2",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 5);
}

#[test]
fn degenerate_basis_exits_1() {
    let dir = TempDir::new().unwrap();
    let data = write(&dir, "d.csv", "1,2\n3,4\n5,6\n");
    let basis = write(&dir, "b.csv", "1,1\n0,0\n0,0\n");
    let o = spca(&[
        "project2d", "--input", s(&data), "--input-kind", "data", "--basis", "file", "--basis-file", s(&basis),
    ]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("dependent"), "{}", stderr(&o));
    let cov = spca(&["project2d", "--builtin", "zou", "--basis", "identity"]);
    assert_eq!(code(&cov), 1);
}

#[test]
fn empty_bench_grid_gives_an_empty_table() {
    let o = spca(&["bench", "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "p,s,sigma,k,runs,failed,card,pev_pct,pca_pev_pct,iters,seconds,errors\n");

    let dir = TempDir::new().unwrap();
    let grid = write(&dir, "g.csv", "p,s,sigma,k\n");
    let o = spca(&["bench", "--grid", s(&grid), "--format", "csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn bench_records_cell_failures_and_continues() {
    let dir = TempDir::new().unwrap();
    let grid = write(&dir, "g.csv", "p,s,sigma,k\n20,4,0.01,2\n5,9,0.01,2\n");
    let o = spca(&["bench", "--grid", s(&grid), "--seeds", "2", "--format", "json"]);
    assert_eq!(code(&o), 2, "{}", stderr(&o));
    let v = json(&o);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    assert_eq!(cells[0]["failed"], 0);
    assert!(cells[0]["card"].is_number());
    assert_eq!(cells[1]["failed"], 2);
    assert!(cells[1]["card"].is_null());
    assert_eq!(cells[1]["errors"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_noiseless_cell_recovers_the_support_size() {
    // ‖x̂x̂ᵀ‖₁/‖x̂‖² ≤ s, so K = s keeps the rank-one optimum feasible.
    let o = spca(&["bench", "--p", "60", "--s", "6", "--noise", "0", "--k", "6", "--seeds", "3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let cell = &json(&o)["cells"][0];
    assert_eq!(cell["card"], 6.0);
    let (pev, pca) = (cell["pev_pct"].as_f64().unwrap(), cell["pca_pev_pct"].as_f64().unwrap());
    assert!((pev - pca).abs() < 1e-3 * pca, "pev {pev} pca {pca}");
}

#[test]
fn bad_grid_line_is_named() {
    let dir = TempDir::new().unwrap();
    let grid = write(&dir, "g.csv", "20,4,0.01,2\n20,four,0.01,2\n");
    let o = spca(&["bench", "--grid", s(&grid)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn synth_is_seeded_and_writes_the_support() {
    let dir = TempDir::new().unwrap();
    let (a, b, sup) = (dir.path().join("a.csv"), dir.path().join("b.csv"), dir.path().join("s.txt"));
    for out in [&a, &b] {
        let o = spca(&[
            "synth", "--model", "spiked", "--p", "20", "--s", "4", "--seed", "3", "--output", s(out),
            "--support-output", s(&sup),
        ]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 20);
    assert!(text.lines().all(|l| l.split(',').count() == 20));
    let support: Vec<usize> = fs::read_to_string(&sup).unwrap().lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(support.len(), 4);
    assert!(support.iter().all(|&i| (1..=20).contains(&i)));
}

#[test]
fn triplet_input_with_header() {
    let dir = TempDir::new().unwrap();
    let t = write(&dir, "t.txt", "3,4\n0,0,1\n0,1,1\n1,2,1\n2,3,1\n0,3,1\n");
    let o = spca(&["solve", "--input", s(&t), "--input-kind", "triplets", "--triplet-header", "--k", "1.5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["dim"], 3);
    let o = spca(&["solve", "--input", s(&t), "--input-kind", "triplets", "--k", "1.5"]);
    assert_eq!(code(&o), 1);
}

/// A valid 4×4 covariance row block with one field replaced by garbage.
fn corrupted_csv() -> impl Strategy<Value = (String, usize)> {
    let garbage = prop_oneof![
        Just("abc".to_string()),
        Just("".to_string()),
        Just("1..2".to_string()),
        Just("nan".to_string()),
        Just("inf".to_string()),
        Just("0x10".to_string()),
        "[a-z]{1,4}",
    ];
    (0..4usize, 0..4usize, garbage).prop_map(|(r, c, g)| {
        let mut rows: Vec<Vec<String>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { "2".into() } else { "0.5".into() }).collect())
            .collect();
        rows[r][c] = g;
        let body = rows.iter().map(|r| r.join(",")).collect::<Vec<_>>().join("\n");
        (body + "\n", r + 1)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn corrupted_inputs_exit_1_naming_the_line((body, line) in corrupted_csv()) {
        let dir = TempDir::new().unwrap();
        let path = write(&dir, "c.csv", &body);
        let o = spca(&["solve", "--input", s(&path), "--k", "2"]);
        prop_assert_eq!(code(&o), 1);
        let err = stderr(&o);
        prop_assert!(err.contains(&format!("line {line}")), "{}", err);
    }

    #[test]
    fn ragged_inputs_exit_1(drop_row in 1..4usize) {
        let dir = TempDir::new().unwrap();
        let rows: Vec<String> = (0..4)
            .map(|i| if i == drop_row { "1,0,0".into() } else { "1,0,0,0".into() })
            .collect();
        let path = write(&dir, "r.csv", &(rows.join("\n") + "\n"));
        let o = spca(&["solve", "--input", s(&path), "--k", "2"]);
        prop_assert_eq!(code(&o), 1);
        prop_assert!(stderr(&o).contains(&format!("line {}", drop_row + 1)), "{}", stderr(&o));
    }
}
