use std::fs;
use std::process::{Command, Output};

fn smc_irl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smc-irl"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn verify_reports_every_coefficient() {
    let out = smc_irl(&["verify", "chaplygin", "--g0", "9.8"]);
    let text = stdout(&out);
    assert!(text.starts_with("g0=9.8\n"));
    assert_eq!(text.matches("coefficient").count(), 7);
    // The assembled model does not reproduce the published table.
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn invalid_override_exits_with_config_code() {
    let out = smc_irl(&["run", "example1", "--override", "episode.samples=0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = smc_irl(&["run", "example1", "--override", "episode.unknown=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_file_is_reported_with_its_path() {
    let out = smc_irl(&["run", "example1", "--config", "/nonexistent/cfg.toml"]);
    assert_ne!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/cfg.toml"));
}

#[test]
fn diverging_plant_exits_with_numerical_code() {
    // A huge step drives RK4 unstable on the stiff closed loop.
    let out = smc_irl(&[
        "run",
        "example1",
        "--override",
        "episode.integrator_substeps=1",
        "--override",
        "episode.sample_interval=1.0",
        "--override",
        "evaluation.horizon=200.0",
        "--override",
        "episode.samples=200",
    ]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn run_eval_and_metrics_chain() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = smc_irl(&["run", "example1", "--out", d]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    for f in [
        "trajectory_before.csv",
        "trajectory_after.csv",
        "trajectory_tanh.csv",
        "history.csv",
        "metrics.txt",
        "learned.toml",
        "config.toml",
        "plot.gp",
    ] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let run_metrics = fs::read_to_string(dir.path().join("metrics.txt")).unwrap();
    assert_eq!(stdout(&out), run_metrics);

    let weights = dir.path().join("learned.toml");
    let eval_dir = dir.path().join("eval");
    let out = smc_irl(&[
        "eval",
        "--weights",
        weights.to_str().unwrap(),
        "--system",
        "siso",
        "--out",
        eval_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let eval_cost = stdout(&out).lines().next().unwrap().to_string();
    let learned_cost = run_metrics
        .lines()
        .find(|l| l.starts_with("learned.total_cost="))
        .unwrap()
        .trim_start_matches("learned.");
    assert_eq!(eval_cost, learned_cost);

    let traj = dir.path().join("trajectory_before.csv");
    let out = smc_irl(&["metrics", "--trajectory", traj.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    let reversals: usize = text
        .lines()
        .find_map(|l| l.strip_prefix("u1.sign_reversals="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(reversals >= 50);
    let signum_cost = run_metrics
        .lines()
        .find(|l| l.starts_with("signum.total_cost="))
        .unwrap()
        .trim_start_matches("signum.");
    assert_eq!(text.lines().next().unwrap(), signum_cost);
}

#[test]
fn eval_rejects_unknown_system() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.toml");
    fs::write(
        &w,
        "system = \"siso\"\ntheta_c = []\n[saturation]\nkind = \"tanh\"\n",
    )
    .unwrap();
    let out = smc_irl(&["eval", "--weights", w.to_str().unwrap(), "--system", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let out = smc_irl(&["eval", "--weights", w.to_str().unwrap(), "--system", "siso"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
