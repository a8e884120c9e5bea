use std::fs;
use std::process::Command;

fn qsigma() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qsigma"))
}

#[test]
fn run_writes_curve_with_flags_over_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("exp.cfg");
    fs::write(
        &config,
        "# walk\nenv=randomwalk19\nscheme=decay:1:0.95\nlambda=0.7\nalpha=0.9\nepisodes=3\nruns=2\n",
    )
    .unwrap();
    let out = dir.path().join("curve.csv");
    let status = qsigma()
        .args(["run", "--config"])
        .arg(&config)
        .args(["--episodes", "5", "--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "episode,mean,stderr,ci_halfwidth");
    assert_eq!(lines.len(), 6);
    assert!(lines[5].starts_with("5,"));
}

#[test]
fn sweep_prints_table() {
    let output = qsigma()
        .args([
            "sweep",
            "--env",
            "windy",
            "--schemes",
            "tderror:max,constant:1",
            "--lambdas",
            "0.5",
        ])
        .args(["--alphas", "0.2,0.5", "--episodes", "3", "--runs", "2"])
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let text = String::from_utf8(output.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("scheme,lambda,alpha,objective,stderr"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn figure_preset_with_run_override() {
    let dir = tempfile::tempdir().unwrap();
    let status = qsigma()
        .args(["figure", "cartpole-sigma", "--runs", "1", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    assert!(dir.path().join("cartpole-sigma_td_error.csv").exists());
    assert!(dir.path().join("cartpole-sigma_totals.csv").exists());
}

#[test]
fn bad_input_is_reported() {
    let output = qsigma().args(["run", "--env", "nowhere"]).output().unwrap();
    assert!(!output.status.success());
    let output = qsigma()
        .args(["run", "--env", "windy", "--lambda", "2"])
        .output()
        .unwrap();
    assert!(!output.status.success());
    assert!(!qsigma().args(["figure", "nope"]).status().unwrap().success());
}
