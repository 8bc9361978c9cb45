use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mhsim::presets;
use mhsim_cli::{execute, CliError, RunRequest, TraceLevel, EFFECTIVE_CONFIG, RUNS_CSV, SUMMARY_CSV, TRACE_DIR};
use tempfile::tempdir;

fn mhsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mhsim")).args(args).output().unwrap()
}

/// A small mobile-client sweep: 8 points x 3 strategies x 2 replications.
fn small_run(out: &Path, jobs: &str) -> Output {
    mhsim(&[
        "run",
        "preset:mobile_client",
        "--set",
        "consumer.total_chunks=200",
        "--set",
        "replications=2",
        "--out",
        out.to_str().unwrap(),
        "--jobs",
        jobs,
    ])
}

fn read_csv(path: &Path) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut rd = csv::Reader::from_path(path).unwrap();
    let header = rd.headers().unwrap().clone();
    (header, rd.records().map(Result::unwrap).collect())
}

#[test]
fn preset_run_writes_one_summary_row_per_point_and_strategy() {
    let dir = tempdir().unwrap();
    let out = small_run(dir.path(), "1");
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join(SUMMARY_CSV));
    assert_eq!(rows.len(), 8 * 3);
    assert_eq!(&header[0], "point");
    for row in &rows {
        assert_eq!(&row[3], "2", "runs per row");
        for (h, v) in header.iter().zip(row.iter()).skip(3) {
            let x: f64 = v.parse().unwrap_or_else(|_| panic!("{h}={v}"));
            assert!(x.is_finite(), "{h}");
        }
    }
    let (_, runs) = read_csv(&dir.path().join(RUNS_CSV));
    assert_eq!(runs.len(), 8 * 3 * 2);
}

#[test]
fn summary_is_identical_across_reruns_and_worker_counts() {
    let (a, b, c) = (tempdir().unwrap(), tempdir().unwrap(), tempdir().unwrap());
    for (d, jobs) in [(&a, "1"), (&b, "1"), (&c, "8")] {
        assert_eq!(small_run(d.path(), jobs).status.code(), Some(0));
    }
    let read = |d: &tempfile::TempDir| fs::read(d.path().join(SUMMARY_CSV)).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&a), read(&c));
}

#[test]
fn overrides_reach_the_effective_config() {
    let dir = tempdir().unwrap();
    let out = mhsim(&[
        "run",
        "preset:vrtt_min",
        "--set",
        "consumer.pipeline=1",
        "--set",
        "consumer.total_chunks=20",
        "--seed",
        "77",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join(EFFECTIVE_CONFIG)).unwrap();
    let cfg = mhsim::parse_and_validate(&text).unwrap();
    assert_eq!((cfg.consumer.pipeline, cfg.consumer.total_chunks, cfg.seed_base), (1, 20, 77));
    let (_, runs) = read_csv(&dir.path().join(RUNS_CSV));
    assert_eq!(&runs[0][4], "77");
}

#[test]
fn misspelled_strategy_is_a_config_error() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut cfg = presets::get("vrtt_min").unwrap().to_json_pretty();
    cfg = cfg.replacen("\"parallel\"", "\"paralell\"", 1);
    fs::write(&path, cfg).unwrap();
    let out = mhsim(&["run", path.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown strategy") && err.contains("parallel"), "{err}");
    assert!(!dir.path().join("o").exists());
}

#[test]
fn unwritable_output_fails_before_simulating() {
    let dir = tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let req = RunRequest {
        config: "preset:retry_sweep".into(),
        overrides: Vec::new(),
        out_dir: blocker.join("out"),
        seed: None,
        trace: TraceLevel::Off,
        jobs: 1,
    };
    let started = std::time::Instant::now();
    let err = execute(&req).unwrap_err();
    assert!(matches!(err, CliError::Write { .. }), "{err}");
    assert_eq!(err.exit_code(), 1);
    assert!(started.elapsed().as_secs() < 2);
}

#[test]
fn incomplete_runs_exit_with_two() {
    let dir = tempdir().unwrap();
    let out = mhsim(&[
        "run",
        "preset:handover",
        "--set",
        "horizon_ms=100",
        "--set",
        "replications=1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let (_, rows) = read_csv(&dir.path().join(SUMMARY_CSV));
    assert_eq!((&rows[0][3], &rows[0][4]), ("0", "1"));
}

#[test]
fn full_trace_writes_one_log_per_run() {
    let dir = tempdir().unwrap();
    let out = mhsim(&[
        "run",
        "preset:vrtt_min",
        "--set",
        "consumer.total_chunks=10",
        "--trace",
        "full",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let logs: Vec<_> = fs::read_dir(dir.path().join(TRACE_DIR)).unwrap().collect();
    assert_eq!(logs.len(), 3);
    let first = fs::read_to_string(logs[0].as_ref().unwrap().path()).unwrap();
    let line = first.lines().next().unwrap();
    let fields: Vec<&str> = line.splitn(4, ' ').collect();
    assert!(fields[0].parse::<u64>().is_ok() && fields.len() == 4, "{line}");
    let (header, runs) = read_csv(&dir.path().join(RUNS_CSV));
    let hash = header.iter().position(|h| h == "trace_hash").unwrap();
    assert!(runs.iter().all(|r| r[hash].len() == 16));
}

#[test]
fn presets_list_and_show() {
    let out = mhsim(&["presets", "list"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in presets::names() {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    let show = mhsim(&["presets", "show", "handover"]);
    let cfg = mhsim::parse_and_validate(&String::from_utf8(show.stdout).unwrap()).unwrap();
    assert_eq!(cfg, presets::get("handover").unwrap());
    assert_eq!(mhsim(&["presets", "show", "nope"]).status.code(), Some(1));
}
