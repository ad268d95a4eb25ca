use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shotnoise-lab"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

const A5_CONFIG: &str = r#"
seed = 11
replicates = 500
t_ladder = [100.0, 1000.0]
u_points = [1.0]

[law]
family = "pareto"
alpha = 1.0
xm = 1.0

[response]
kind = "constant"
c = 1.0
"#;

#[test]
fn moments_row_contains_the_closed_form_value() {
    let dir = tempfile::tempdir().unwrap();
    let out =
        run(&["moments", "--alpha", "0.5", "--beta", "1", "--k", "1", "--out", "o", "--format", "csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("o/moments.csv")).unwrap();
    let row = csv.lines().find(|l| l.starts_with("0.5,1,1,1,")).expect("k = 1 row");
    assert!(row.contains("0.424413"), "{row}");
    assert!(!dir.path().join("o/moments.json").exists());
}

#[test]
fn conjectured_regime_reports_informational_verdicts_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), A5_CONFIG);
    let out = run(&["verify-limit", "--config", &cfg, "--out", "o", "--threads", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("o/verify_limit.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().filter(|l| l.starts_with("a5,")).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.ends_with(",informational")));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/verify_limit.json")).unwrap()).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["seed"], 11);
    assert_eq!(json["config"]["law"]["family"], "pareto");
}

#[test]
fn zero_replicates_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "replicates = 0\n");
    let out = run(&["verify-limit", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).expect("error JSON on stderr");
    assert_eq!(err["error"], "config_error");
    assert!(err["message"].as_str().unwrap().contains("replicates"));
}

#[test]
fn malformed_inputs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t_ladder = [10.0, 5.0]\n");
    assert_eq!(run(&["simulate", "--config", &cfg], dir.path()).status.code(), Some(2));
    let cfg = write_config(dir.path(), "this is not toml");
    assert_eq!(run(&["simulate", "--config", &cfg], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--config", "missing.toml"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["moments", "--alpha", "1.5"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["moments", "--format", "xml"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"], dir.path()).status.code(), Some(2));
    let cfg = write_config(dir.path(), "case = \"a3\"\n");
    assert_eq!(run(&["verify-limit", "--config", &cfg], dir.path()).status.code(), Some(2));
}

#[test]
fn failed_verdicts_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    // an impossible KS threshold forces a failed verdict
    let cfg = write_config(
        dir.path(),
        "replicates = 200\nt_ladder = [50.0]\nu_points = [1.0]\n[thresholds]\nks_distance = 1e-9\n",
    );
    let out = run(&["verify-limit", "--config", &cfg, "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "verdict_failed");
}

#[test]
fn simulate_outputs_are_byte_identical_across_reruns_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
seed = 5
t_ladder = [100.0, 1000.0]
u_points = [0.5, 2.0]
grid_points = 21
simulate_paths = 4
formats = ["csv", "json", "svg"]

[law]
family = "gamma"
shape = 2.0
rate = 1.0

[response]
kind = "power"
beta = 0.5
left_tail = { kind = "exponential", scale = 1.0, rate = 2.0 }
"#,
    );
    let mut docs = Vec::new();
    for (i, threads) in ["1", "3"].iter().enumerate() {
        let out_dir = format!("o{i}");
        let out = run(&["simulate", "--config", &cfg, "--out", &out_dir, "--threads", threads], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let files: Vec<Vec<u8>> = ["csv", "json", "svg"]
            .iter()
            .map(|ext| std::fs::read(dir.path().join(&out_dir).join(format!("simulate.{ext}"))).unwrap())
            .collect();
        docs.push(files);
    }
    assert_eq!(docs[0], docs[1]);
    let csv = String::from_utf8(docs[0][0].clone()).unwrap();
    assert!(csv.starts_with("# schema_version=1\n# seed=5\n# config={"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 2 * 4 * 21);
    let svg = String::from_utf8(docs[0][2].clone()).unwrap();
    assert!(svg.contains("seed=5") && svg.contains("config="));
}

#[test]
fn seed_override_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t_ladder = [100.0]\nsimulate_paths = 2\ngrid_points = 5\n");
    let a = run(&["simulate", "--config", &cfg, "--out", "a", "--seed", "1", "--format", "csv"], dir.path());
    let b = run(&["simulate", "--config", &cfg, "--out", "b", "--seed", "2", "--format", "csv"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let ca = std::fs::read_to_string(dir.path().join("a/simulate.csv")).unwrap();
    let cb = std::fs::read_to_string(dir.path().join("b/simulate.csv")).unwrap();
    assert!(ca.contains("# seed=1") && cb.contains("# seed=2"));
    assert_ne!(ca.lines().last(), cb.lines().last());
}

#[test]
fn stable_check_and_selfsim_run_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"
[stable_check]
alphas = [1.5]
z = [1.0]
draws = 50000

[selfsim]
process = "z"
alpha = 0.5
beta = 1.0
paths = 5000
repetitions = 2
min_passes = 1
subordinator_steps = 128
"#,
    );
    let out = run(&["stable-check", "--config", &cfg, "--out", "o", "--format", "csv,svg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("o/stable_check.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("1.5,1,")));
    assert!(dir.path().join("o/stable_check.svg").exists());
    let out = run(&["selfsim", "--config", &cfg, "--out", "o", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/selfsim.json")).unwrap()).unwrap();
    assert_eq!(json["result"]["hurst"], 1.5);
}
