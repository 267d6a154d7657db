//! Drives the built binary end to end: output shapes, config layering, and
//! the exit code contract (0 ok, 2 config, 3 i/o, 4 failed check).

use std::path::Path;
use std::process::{Command, Output};

fn mslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn power_curve_prints_a_full_slope_grid() {
    let out = mslab(&["power", "--n", "1000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# command = power"));
    assert!(text.contains("# d_n = "));
    assert!(text.contains("beta,power,accept_prob"));
    let data_rows = text.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert!(data_rows > 150, "grid should be dense, got {data_rows} rows");
}

#[test]
fn power_at_zero_slope_equals_the_level() {
    let out = mslab(&[
        "power",
        "--n",
        "1000",
        "--beta",
        "0",
        "--calibration",
        "aic",
        "--alpha",
        "0.05",
        "--assert",
        "power>=0.0499999",
        "--assert",
        "power<=0.0500001",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn risk_reproduces_the_closed_form() {
    let out = mslab(&["risk", "--beta", "0.1", "--n", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("method = exact"));
    assert!(
        text.contains("risk = 1.23709138356e-2"),
        "unexpected risk line in:\n{text}"
    );
    assert!(text.contains("accept_prob = 8.74095395213e-1"));
}

#[test]
fn simulated_risk_reports_its_standard_error() {
    let out = mslab(&[
        "risk", "--beta", "0.1", "--n", "100", "--replicates", "20000", "--seed", "7",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("method = monte_carlo"));
    assert!(text.contains("mc_std_error = "));
}

#[test]
fn sweep_writes_a_file_and_summarizes_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("yang.csv");
    let out = mslab(&[
        "sweep",
        "--preset",
        "yang",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("wrote "));
    assert!(text.contains("verdict.power = TENDS_TO_ZERO"));
    assert!(text.contains("verdict.scaled_bias = DIVERGES"));

    let file = std::fs::read_to_string(&path).unwrap();
    assert!(file.starts_with("# scenario = yang"));
    let rows = file.lines().filter(|l| !l.starts_with('#')).count() - 1;
    assert_eq!(rows, 7, "decade grid 1e2..1e8");
}

#[test]
fn sweep_plotdata_carries_the_selected_series() {
    let out = mslab(&[
        "sweep",
        "--preset",
        "contiguous",
        "--format",
        "plotdata",
        "--series",
        "scaled_bias",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("# columns: log10_n scaled_bias"));
    let last = text.lines().last().unwrap();
    let ordinate: f64 = last.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!(
        (ordinate - 4.0).abs() <= 0.2,
        "limit of the scaled bias should sit near 4, got {ordinate}"
    );
}

#[test]
fn config_file_applies_under_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(
        &cfg,
        "# experiment\nscenario = yang\ntau = 2\ngrid = 100:10000:1\n",
    )
    .unwrap();
    let out = mslab(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--tau",
        "4",
        "--assert",
        "rows==3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("consistent_log tau=4"),
        "flag must beat the file value:\n{text}"
    );
}

#[test]
fn missing_scenario_and_bad_names_exit_two() {
    let out = mslab(&["sweep"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--preset"));

    let out = mslab(&["sweep", "--preset", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown scenario"));

    let out = mslab(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2), "clap usage errors exit 2");

    let out = mslab(&["sweep", "--preset", "yang", "--alpha", "0.1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("aic"));
}

#[test]
fn unwritable_output_exits_three() {
    let out = mslab(&[
        "sweep",
        "--preset",
        "contiguous",
        "--out",
        "/nonexistent/dir/out.csv",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("/nonexistent/dir/out.csv"));
}

#[test]
fn failed_checks_exit_four_and_write_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("never.csv");
    let out = mslab(&[
        "sweep",
        "--preset",
        "yang",
        "--out",
        path.to_str().unwrap(),
        "--assert",
        "verdict.power==DIVERGES",
    ]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains("failed"));
    assert!(!Path::new(&path).exists(), "failed runs must not leave files");
}

#[test]
fn classify_reports_both_verdicts() {
    let out = mslab(&[
        "classify",
        "--sequence",
        "contiguous",
        "--r",
        "2",
        "--assert",
        "contiguous==true",
        "--assert",
        "separation==WELL",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("separation = WELL"));
    assert!(text.contains("contiguous = true"));

    let out = mslab(&[
        "classify",
        "--sequence",
        "yang",
        "--assert",
        "contiguous==false",
        "--assert",
        "separation==STRONG",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn single_pair_distances_match_frozen_values() {
    let out = mslab(&[
        "distances",
        "--beta",
        "2",
        "--sxx",
        "1",
        "--assert",
        "holds==true",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(
        text.contains("l1 = 1.36537898427e0"),
        "unexpected l1 line in:\n{text}"
    );
    assert!(text.contains("affinity = 6.06530659713e-1"));
}

#[test]
fn distance_audit_holds_everywhere() {
    let out = mslab(&[
        "distances",
        "--replicates",
        "200",
        "--seed",
        "3",
        "--assert",
        "all_hold==true",
        "--assert",
        "rows==200",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn gap_demo_stays_inside_its_tolerance() {
    let out = mslab(&["lemma1", "--assert", "worst_deviation<=1e-9"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| !l.starts_with('#')).count() >= 4);
}
