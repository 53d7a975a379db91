use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qgrid(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgrid"))
        .args(args)
        .current_dir(cwd)
        .env_remove("QGRID_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

const CUSTOM: &[&str] = &[
    "run", "--dims", "5x5", "--start", "0,0", "--goal", "4,4", "--episodes", "200", "--alpha", "0.5", "--gamma",
    "0.5", "--epsilon", "0.2", "--max-steps", "500", "--seed", "1",
];

#[test]
fn custom_run_writes_all_files() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = CUSTOM.to_vec();
    args.extend(["--out", "run1"]);
    let out = qgrid(&args, tmp.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let dir = tmp.path().join("run1");
    let episodes = fs::read_to_string(dir.join("episodes.csv")).unwrap();
    let mut lines = episodes.lines();
    assert_eq!(lines.next(), Some("episode,total_reward,steps,cumulative_reward"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 200);
    let mut cumulative = 0.0;
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], (i + 1).to_string());
        let reward: f64 = row[1].parse().unwrap();
        cumulative += reward;
        assert!(row[2].parse::<usize>().unwrap() <= 500);
        assert_eq!(row[3].parse::<f64>().unwrap(), cumulative);
    }

    let path = fs::read_to_string(dir.join("path.csv")).unwrap();
    assert!(path.starts_with("step,c0,c1\n0,0,0\n"));

    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap();
    let cfg = &summary["config"];
    assert_eq!(cfg["dims"], serde_json::json!([5, 5]));
    assert_eq!(cfg["seed"], 1);
    assert_eq!(cfg["max_steps"], 500);
    assert_eq!(cfg["alpha"], 0.5);
    assert!(summary["stabilization"]["episode"].as_u64().is_some());
    assert_eq!(summary["manhattan_distance"], 8);
    assert!(!dir.join("qtable.txt").exists());
}

#[test]
fn preset_run_is_byte_identical_and_replayable() {
    let tmp = tempfile::tempdir().unwrap();
    for dir in ["a", "b"] {
        let out = qgrid(&["run", "--preset", "paper-2d", "--seed", "7", "--dump-q", "--out", dir], tmp.path());
        assert_eq!(code(&out), 0);
    }
    let out = qgrid(&["replay", "a/summary.json", "--dump-q", "--out", "c"], tmp.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for file in ["episodes.csv", "path.csv", "qtable.txt"] {
        let a = fs::read(tmp.path().join("a").join(file)).unwrap();
        assert_eq!(a, fs::read(tmp.path().join("b").join(file)).unwrap(), "{file}");
        assert_eq!(a, fs::read(tmp.path().join("c").join(file)).unwrap(), "{file} replay");
    }
    let episodes = fs::read_to_string(tmp.path().join("a/episodes.csv")).unwrap();
    assert_eq!(episodes.lines().count(), 501);
}

#[test]
fn out_dir_defaults_to_env_root() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_qgrid"))
        .args(["run", "--preset", "paper-2d", "--seed", "3", "--episodes", "50"])
        .current_dir(tmp.path())
        .env("QGRID_OUT_DIR", tmp.path().join("results"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(tmp.path().join("results/paper-2d-seed3/episodes.csv").exists());
}

#[test]
fn invalid_flags_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        vec!["run", "--preset", "paper-5d"],
        vec!["run", "--dims", "5x"],
        vec!["run", "--dims", "5x5", "--goal", "5,4"],
        vec!["run", "--dims", "5x5", "--start", "1,1", "--goal", "1,1"],
        vec!["run", "--preset", "paper-2d", "--epsilon", "1.5"],
        vec!["run", "--preset", "paper-2d", "--episodes", "10"],
        vec!["run"],
        vec!["replay", "missing.json"],
    ] {
        let out = qgrid(&args, tmp.path());
        assert_eq!(code(&out), 2, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn io_failure_exits_1() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("blocker"), "not a directory").unwrap();
    let out = qgrid(&["run", "--dims", "3x3", "--episodes", "30", "--out", "blocker/run"], tmp.path());
    assert_eq!(code(&out), 1);
}

#[test]
fn three_dimensional_path_header() {
    let tmp = tempfile::tempdir().unwrap();
    let out = qgrid(&["run", "--dims", "3x3x3", "--episodes", "100", "--window", "10", "--out", "r"], tmp.path());
    assert_eq!(code(&out), 0);
    let path = fs::read_to_string(tmp.path().join("r/path.csv")).unwrap();
    assert!(path.starts_with("step,c0,c1,c2\n0,0,0,0\n"));
}

#[test]
fn sweep_two_presets() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("sweep.json"), r#"{"presets": ["paper-2d", "paper-3d"], "seeds": [4]}"#).unwrap();
    let out = qgrid(&["sweep", "--config", "sweep.json", "--out", "sw", "--jobs", "2"], tmp.path());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("sw/sweep_summary.json")).unwrap()).unwrap();
    let m2 = summary["presets"][0]["median_stabilization"].as_f64().unwrap();
    let m3 = summary["presets"][1]["median_stabilization"].as_f64().unwrap();
    assert_eq!(summary["scaling_ratio"].as_f64().unwrap(), m3 / m2);
    assert!(summary["failures"].as_array().unwrap().is_empty());
    assert!(tmp.path().join("sw/paper-3d/seed-4/episodes.csv").exists());
}

#[test]
fn single_cell_sweep_matches_single_run() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("s.json"), r#"{"presets": ["paper-2d"], "base_seed": 9, "num_seeds": 1}"#).unwrap();
    assert_eq!(code(&qgrid(&["sweep", "--config", "s.json", "--out", "sw"], tmp.path())), 0);
    assert_eq!(code(&qgrid(&["run", "--preset", "paper-2d", "--seed", "9", "--out", "one"], tmp.path())), 0);
    assert_eq!(
        fs::read(tmp.path().join("sw/paper-2d/seed-9/episodes.csv")).unwrap(),
        fs::read(tmp.path().join("one/episodes.csv")).unwrap()
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("sw/sweep_summary.json")).unwrap()).unwrap();
    assert!(summary["scaling_ratio"].is_null());
}

#[test]
fn empty_seed_list_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("s.json"), r#"{"presets": ["paper-2d"], "seeds": []}"#).unwrap();
    assert_eq!(code(&qgrid(&["sweep", "--config", "s.json", "--out", "sw"], tmp.path())), 2);
    assert_eq!(code(&qgrid(&["sweep", "--config", "nope.json"], tmp.path())), 2);
}
