use std::fs;
use std::process::{Command, Output};

fn classsize(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_classsize"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
}

#[test]
fn solve_small_school() {
    let out = classsize(&["solve", "--Z", "5", "--p", "0.77", "--W", "1.2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(field(&text, "sizes"), "2,3");
    assert_eq!(field(&text, "profit"), "0.155399");
    assert_eq!(field(&text, "agreement"), "true");
}

#[test]
fn solve_three_classes_after_p_rises() {
    let text = stdout(&classsize(&[
        "solve", "--Z", "5", "--p", "0.62", "--W", "0.673",
    ]));
    assert_eq!(field(&text, "sizes"), "1,2,2");
}

#[test]
fn solve_single_student() {
    let text = stdout(&classsize(&[
        "solve", "--Z", "1", "--p", "0.5", "--W", "0.1",
    ]));
    assert_eq!(field(&text, "sizes"), "1");
    assert_eq!(field(&text, "profit"), "0.400000");
}

#[test]
fn solve_rejects_bad_p() {
    let out = classsize(&["solve", "--Z", "5", "--p", "1.5", "--W", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = classsize(&["solve", "--p", "0.5", "--W", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = classsize(&[
        "solve",
        "--Z",
        "5",
        "--p",
        "0.5",
        "--W",
        "0.1",
        "--tolerance",
        "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solve_json_is_deterministic() {
    let args = [
        "solve", "--Z", "12", "--p", "0.9", "--W", "0.8", "--format", "json",
    ];
    let a = stdout(&classsize(&args));
    assert_eq!(a, stdout(&classsize(&args)));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["agreement"], true);
    assert_eq!(
        v["sizes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|n| n.as_u64().unwrap())
            .sum::<u64>(),
        12
    );
}

#[test]
fn config_file_supplies_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    fs::write(&cfg, "# school\nZ = 5\np = 0.77\nW = 1.2\nformat = json\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&classsize(&["--config", cfg, "solve"]))).unwrap();
    assert_eq!(v["sizes"], serde_json::json!([2, 3]));
    let v: serde_json::Value = serde_json::from_str(&stdout(&classsize(&[
        "--config", cfg, "solve", "--p", "0.62", "--W", "0.673",
    ])))
    .unwrap();
    assert_eq!(v["sizes"], serde_json::json!([1, 2, 2]));
    let text = stdout(&classsize(&["--config", cfg, "--format", "text", "solve"]));
    assert_eq!(field(&text, "sizes"), "2,3");
}

#[test]
fn missing_config_file_is_usage_error() {
    let out = classsize(&["--config", "/nonexistent/run.conf", "solve"]);
    assert_eq!(out.status.code(), Some(2));
}

fn read_cells(path: &std::path::Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn atlas_shows_class_count_rising_with_p() {
    let dir = tempfile::tempdir().unwrap();
    let out = classsize(&[
        "atlas",
        "--Z",
        "5",
        "--w-grid",
        "0.673",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let cells = read_cells(&dir.path().join("cells.csv"));
    assert_eq!(cells.len(), 99);
    let at = |p: &str| cells.iter().find(|c| c[0] == p).unwrap().clone();
    let (low, high) = (at("0.6"), at("0.62"));
    assert_eq!((low[2].as_str(), low[3].as_str()), ("2", "2"), "{low:?}");
    assert_eq!((high[2].as_str(), high[3].as_str()), ("3", "3"), "{high:?}");
    assert!(dir.path().join("curves.csv").exists());
}

#[test]
fn atlas_files_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let out = classsize(&["atlas", "--Z", "7", "--out", d.path().to_str().unwrap()]);
        assert!(out.status.success());
    }
    for name in ["cells.csv", "curves.csv"] {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap()
        );
    }
}

#[test]
fn atlas_never_lands_in_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    let out = classsize(&[
        "atlas",
        "--Z",
        "10",
        "--p-grid",
        "0.05:0.95:19",
        "--w-grid",
        "0.05:2:40",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let cells = read_cells(&dir.path().join("cells.csv"));
    assert_eq!(cells.len(), 19 * 40);
    for c in &cells {
        let m: usize = c[2].parse().unwrap();
        if c[4] == "true" {
            assert!(m <= 5 || m == 10, "{c:?}");
        }
    }
}

#[test]
fn atlas_empty_grid_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = classsize(&[
        "atlas",
        "--Z",
        "5",
        "--p-grid",
        "",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conjecture_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = classsize(&[
        "conjecture",
        "--from",
        "5",
        "--to",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(field(&stdout(&out), "status"), "VIOLATION-FREE");
    let report = fs::read_to_string(&path).unwrap();
    assert!(
        report.lines().any(|l| l.starts_with("5,2,3,0.4472135955,")),
        "{report}"
    );
}

#[test]
fn conjecture_bad_ranges() {
    assert_eq!(
        classsize(&["conjecture", "--from", "9", "--to", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        classsize(&["conjecture", "--from", "5", "--to", "201"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn multitype_mixed_example() {
    let text = stdout(&classsize(&[
        "multitype",
        "--probs",
        "0.8,0.5",
        "--counts",
        "3,3",
        "--W",
        "0.51",
    ]));
    assert_eq!(field(&text, "profit"), "1.050000");
    assert_eq!(field(&text, "mixed_classes"), "1");
    assert_eq!(field(&text, "forest"), "true");
}

#[test]
fn multitype_single_type_matches_solve() {
    let multi = stdout(&classsize(&[
        "multitype",
        "--probs",
        "0.77",
        "--counts",
        "5",
        "--W",
        "1.2",
    ]));
    let single = stdout(&classsize(&[
        "solve", "--Z", "5", "--p", "0.77", "--W", "1.2",
    ]));
    assert_eq!(field(&multi, "profit"), field(&single, "profit"));
    assert_eq!(field(&multi, "classes"), "2");
}

#[test]
fn multitype_over_cap() {
    let out = classsize(&[
        "multitype",
        "--probs",
        "0.8,0.5",
        "--counts",
        "30,30",
        "--W",
        "0.51",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_quick_passes() {
    let out = classsize(&["verify", "--scale", "quick", "--seed", "7"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(
        text.lines().filter(|l| l.starts_with("PASS ")).count() >= 19,
        "{text}"
    );
    assert!(!text.contains("FAIL "));
}
