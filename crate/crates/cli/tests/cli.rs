use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn tmoga(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tmoga"))
        .args(args)
        .env_remove("CI")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = tmoga(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    tmoga(args).status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn count(dir: &Path, ext: &str) -> usize {
    fs::read_dir(dir)
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == ext))
        .count()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// A small synfix run shared by several tests.
fn synfix_detect(tmp: &TempDir, extra: &[&str]) -> (std::path::PathBuf, std::path::PathBuf) {
    let data = tmp.path().join("data");
    let out = tmp.path().join("out");
    ok(&["generate", "synfix", "--z", "3", "--seed", "1", "-o", p(&data)]);
    let mut args = vec![
        "detect",
        p(&data),
        "--truth",
        p(&data),
        "--population",
        "24",
        "--generations",
        "4",
        "--seed",
        "5",
        "-o",
        p(&out),
    ];
    args.extend_from_slice(extra);
    let args: Vec<String> = args.into_iter().map(String::from).collect();
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    ok(&refs);
    (data, out)
}

#[test]
fn generate_synfix_writes_ten_snapshots() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("d");
    ok(&["generate", "synfix", "--z", "3", "--seed", "1", "-o", p(&dir)]);
    assert_eq!(count(&dir, "edges"), 10);
    assert_eq!(count(&dir, "truth"), 10);
    let manifest = read_json(&dir.join("manifest.json"));
    assert_eq!(manifest["generator"], "synfix");
    assert_eq!(manifest["nodes"], 128);
    assert!(dir.join("events.json").exists());
}

#[test]
fn generate_synvar_community_counts() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("d");
    ok(&["generate", "synvar", "--z", "6", "--seed", "4", "-o", p(&dir)]);
    let manifest = read_json(&dir.join("manifest.json"));
    let counts: Vec<u64> = manifest["community_counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![4, 5, 6, 7, 8, 8, 7, 6, 5, 4]);
}

#[test]
fn generate_event_model_with_overrides() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("d");
    ok(&[
        "generate",
        "merge-split",
        "--nodes",
        "300",
        "--snapshots",
        "3",
        "--seed",
        "2",
        "-o",
        p(&dir),
    ]);
    assert_eq!(count(&dir, "edges"), 3);
    let manifest = read_json(&dir.join("manifest.json"));
    assert_eq!(manifest["parameters"]["nodes"], 300);
}

#[test]
fn unknown_model_is_usage_error() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&["generate", "lfr", "-o", p(tmp.path())]), 2);
}

#[test]
fn detect_writes_report_and_partitions() {
    let tmp = TempDir::new().unwrap();
    let (_, out) = synfix_detect(&tmp, &[]);
    assert_eq!(count(&out, "part"), 10);
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["params"]["population_size"], 24);
    let snaps = report["snapshots"].as_array().unwrap();
    assert_eq!(snaps.len(), 10);
    assert!(snaps[0]["nmi_previous"].is_null());
    assert!(snaps[1]["nmi_previous"].is_number());
    assert!(snaps.iter().all(|s| s["nmi_truth"].is_number()));
    for name in ["summary.csv", "fronts.csv", "trace.csv"] {
        assert!(out.join(name).exists(), "{name}");
    }
    let fronts = fs::read_to_string(out.join("fronts.csv")).unwrap();
    assert_eq!(fronts.lines().filter(|l| l.ends_with(".part")).count(), 10);
}

#[test]
fn evaluate_reproduces_report_metrics() {
    let tmp = TempDir::new().unwrap();
    let (data, out) = synfix_detect(&tmp, &[]);
    let eval_dir = tmp.path().join("eval");
    ok(&[
        "evaluate",
        "--partitions",
        p(&out),
        "--truth",
        p(&data),
        "--snapshots",
        p(&data),
        "-o",
        p(&eval_dir),
    ]);
    let report = read_json(&out.join("report.json"));
    let eval = read_json(&eval_dir.join("evaluation.json"));
    let rows = eval["rows"].as_array().unwrap();
    for (s, r) in report["snapshots"].as_array().unwrap().iter().zip(rows) {
        for key in ["modularity", "community_score", "nmi_truth"] {
            let a = s[key].as_f64().unwrap();
            let b = r[key].as_f64().unwrap();
            assert!((a - b).abs() <= 1e-12, "{key}: {a} vs {b}");
        }
        assert_eq!(s["communities"], r["communities"]);
    }
}

#[test]
fn detect_is_deterministic_with_one_worker() {
    let tmp = TempDir::new().unwrap();
    let (data, out) = synfix_detect(&tmp, &["--workers", "1"]);
    let again = tmp.path().join("again");
    ok(&[
        "detect",
        p(&data),
        "--population",
        "24",
        "--generations",
        "4",
        "--seed",
        "5",
        "--workers",
        "1",
        "-o",
        p(&again),
    ]);
    for t in 1..=10 {
        let name = format!("snapshot_{t:03}.part");
        assert_eq!(
            fs::read_to_string(out.join(&name)).unwrap(),
            fs::read_to_string(again.join(&name)).unwrap()
        );
    }
}

#[test]
fn variant_and_config_precedence() {
    let tmp = TempDir::new().unwrap();
    let config = tmp.path().join("config.json");
    fs::write(&config, r#"{"population_size": 12, "generations": 2, "variant": "tmoga2"}"#).unwrap();
    let (_, out) = synfix_detect(&tmp, &["--config", p(&config)]);
    let report = read_json(&out.join("report.json"));
    // Flags given by the helper win over the file.
    assert_eq!(report["params"]["population_size"], 24);
    assert_eq!(report["params"]["generations"], 4);
    assert_eq!(report["params"]["snapshot_cost"], "community-score");
    assert_eq!(report["params"]["pareto_selector"], "modularity");
}

#[test]
fn zero_generations_runs() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    let out = tmp.path().join("out");
    ok(&["generate", "synfix", "-o", p(&data)]);
    ok(&[
        "detect",
        p(&data),
        "--population",
        "16",
        "--generations",
        "0",
        "--variant",
        "sde",
        "--seed",
        "1",
        "-o",
        p(&out),
    ]);
    let report = read_json(&out.join("report.json"));
    assert_eq!(report["params"]["generations"], 0);
    assert_eq!(report["params"]["density_estimator"], "shift-based");
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 11);
}

#[test]
fn evaluate_truth_against_itself() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    ok(&["generate", "synfix", "--seed", "3", "-o", p(&data)]);
    let parts = tmp.path().join("parts");
    fs::create_dir(&parts).unwrap();
    for t in 1..=10 {
        fs::copy(
            data.join(format!("snapshot_{t:03}.truth")),
            parts.join(format!("snapshot_{t:03}.part")),
        )
        .unwrap();
    }
    let csv = ok(&["evaluate", "--partitions", p(&parts), "--truth", p(&data)]);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    for row in rows {
        let nmi: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!((nmi - 1.0).abs() < 1e-12, "{nmi}");
    }
}

#[test]
fn evaluate_singletons_on_clique_is_negative() {
    let tmp = TempDir::new().unwrap();
    let snaps = tmp.path().join("snaps");
    let parts = tmp.path().join("parts");
    fs::create_dir(&snaps).unwrap();
    fs::create_dir(&parts).unwrap();
    let mut edges = String::new();
    for u in 0..6 {
        for v in u + 1..6 {
            edges.push_str(&format!("{u} {v}\n"));
        }
    }
    let singletons: String = (0..6).map(|u| format!("{u} {u}\n")).collect();
    fs::write(snaps.join("a.edges"), edges).unwrap();
    fs::write(parts.join("a.part"), singletons).unwrap();
    let csv = ok(&["evaluate", "--partitions", p(&parts), "--snapshots", p(&snaps)]);
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert!(row[3].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn evaluate_without_reference_is_usage_error() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&["evaluate", "--partitions", p(tmp.path())]), 2);
}

#[test]
fn evaluate_count_mismatch_is_usage_error() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    ok(&["generate", "synfix", "-o", p(&data)]);
    let parts = tmp.path().join("parts");
    fs::create_dir(&parts).unwrap();
    fs::copy(data.join("snapshot_001.truth"), parts.join("a.part")).unwrap();
    assert_eq!(code(&["evaluate", "--partitions", p(&parts), "--truth", p(&data)]), 2);
}

#[test]
fn missing_input_is_io_error() {
    let tmp = TempDir::new().unwrap();
    let missing = tmp.path().join("nothing-here.edges");
    assert_eq!(code(&["detect", p(&missing), "--seed", "1", "-o", p(tmp.path())]), 3);
}

#[test]
fn invalid_probability_is_usage_error() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    ok(&["generate", "synfix", "-o", p(&data)]);
    assert_eq!(code(&["detect", p(&data), "--mp", "1.5", "-o", p(tmp.path())]), 2);
}

#[test]
fn init_compare_first_row_ties() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    let csv_path = tmp.path().join("init.csv");
    ok(&["generate", "synfix", "--seed", "2", "-o", p(&data)]);
    let csv = ok(&[
        "init-compare",
        p(&data),
        "--truth",
        p(&data),
        "--seed",
        "3",
        "-o",
        p(&csv_path),
    ]);
    assert_eq!(fs::read_to_string(&csv_path).unwrap(), csv);
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "time,random,label-prop,naive-transfer,feature-transfer"
    );
    let first: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(first[2], first[4]);
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn verify_exit_codes() {
    let out = ok(&["verify", "--trials", "1"]);
    assert!(out.contains("PASS"));
    assert!(!out.contains("FAIL"));
    assert_eq!(code(&["verify", "--trials", "1", "--inject-fault"]), 1);
    assert_eq!(code(&["verify", "--trials", "0"]), 2);
}

#[test]
fn seed_required_in_ci() {
    let tmp = TempDir::new().unwrap();
    let data = tmp.path().join("data");
    ok(&["generate", "synfix", "-o", p(&data)]);
    let out = Command::new(env!("CARGO_BIN_EXE_tmoga"))
        .args(["detect", p(&data), "-o", p(tmp.path())])
        .env("CI", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
