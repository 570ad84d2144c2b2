//! End-to-end tests against the compiled `heatplan` binary.

use std::path::Path;
use std::process::{Command, Output};

fn heatplan(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heatplan"))
        .args(args)
        .current_dir(dir)
        .env_remove("HEATPLAN_SEED")
        .output()
        .expect("spawn heatplan")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn simulate_oracle_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(
        &[
            "simulate",
            "--t0",
            "20",
            "--target",
            "60",
            "--deadline",
            "60",
            "--controller",
            "oracle",
            "--out",
            "traj.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    assert!(line.contains("energy_wh=3400"), "{line}");
    assert!(line.contains("success=true"), "{line}");
    let traj = std::fs::read_to_string(dir.path().join("traj.csv")).unwrap();
    assert!(traj.starts_with("step,temp_c,action,power_w,reward,cum_energy_wh\n"));
    assert_eq!(traj.lines().count(), 61); // header + one row per control step
}

#[test]
fn simulate_bangbang_energy_in_derived_band() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(
        &["simulate", "--controller", "bangbang", "--out", "t.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out);
    let energy: f64 = line
        .split_whitespace()
        .find_map(|t| t.strip_prefix("energy_wh="))
        .unwrap()
        .parse()
        .unwrap();
    assert!((7400.0..=7900.0).contains(&energy), "{energy}");
}

#[test]
fn invalid_spec_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(&["simulate", "--deadline", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_controller_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(&["simulate", "--controller", "pid"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ppo_without_policy_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(&["simulate", "--controller", "ppo"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_sweep_axis_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(&["sweep", "--vary", "mass"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_used_and_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(
        &cfg,
        "controller = oracle\ndeadline = 30 # comment\nout = a.csv\n",
    )
    .unwrap();

    let out = heatplan(&["--config", cfg.to_str().unwrap(), "simulate"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let echo = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(echo.contains("deadline=30"), "{echo}");
    assert!(echo.contains("controller=oracle"), "{echo}");

    // Flag wins over the file value.
    let out = heatplan(
        &[
            "--config",
            cfg.to_str().unwrap(),
            "simulate",
            "--deadline",
            "45",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let echo = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(echo.contains("deadline=45"), "{echo}");
}

#[test]
fn malformed_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "this line has no equals sign\n").unwrap();
    let out = heatplan(&["--config", cfg.to_str().unwrap(), "simulate"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn train_one_batch_and_reproducible_policy() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(
        &[
            "train", "--steps", "2048", "--seed", "9", "--out", "p1.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let curve = std::fs::read_to_string(dir.path().join("p1.csv")).unwrap();
    assert!(curve.starts_with("env_steps,mean_return,mean_energy_wh\n"));
    assert_eq!(curve.lines().count(), 2); // header + one batch

    let out = heatplan(
        &[
            "train", "--steps", "2048", "--seed", "9", "--out", "p2.json",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read(dir.path().join("p1.json")).unwrap();
    let b = std::fs::read(dir.path().join("p2.json")).unwrap();
    assert_eq!(a, b, "same seed must give byte-identical policy files");
}

#[test]
fn seed_env_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_heatplan"))
        .args(["simulate", "--controller", "bangbang", "--out", "t.csv"])
        .current_dir(dir.path())
        .env("HEATPLAN_SEED", "77")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let echo = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(echo.contains("seed=77"), "{echo}");
}

#[test]
fn mcts_trace_is_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(
        &[
            "simulate",
            "--controller",
            "mcts",
            "--sims",
            "200",
            "--deadline",
            "10",
            "--target",
            "30",
            "--trace",
            "trace.jsonl",
            "--out",
            "t.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let trace = std::fs::read_to_string(dir.path().join("trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 10);
    for line in trace.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("step").is_some() && v.get("root_visits").is_some());
        assert!(v.get("q").is_some() && v.get("chosen").is_some());
    }
}

#[test]
fn sweep_then_plot_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let out = heatplan(
        &[
            "sweep",
            "--vary",
            "deadline",
            "--controllers",
            "bangbang,oracle",
            "--out",
            "res.csv",
            "--jobs",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("res.csv")).unwrap();
    assert!(csv.starts_with(
        "controller,t0_c,t_target_c,deadline_steps,seed,energy_wh,terminal_temp_c,success,on_steps,episode_return,wall_ms\n"
    ));
    // 5 grid points x 2 deterministic controllers
    assert_eq!(csv.lines().count(), 11);

    let out = heatplan(&["plot", "--in", "res.csv", "--out", "fig.svg"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(dir.path().join("fig.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(dir.path().join("fig.csv").exists());
    let echo = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(echo.contains("axis=deadline"), "inferred axis: {echo}");
}
