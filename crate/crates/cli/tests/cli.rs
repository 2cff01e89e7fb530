use std::process::{Command, Output};

use serde_json::Value;

const THIRD: &str = "0.3333333333333333";

fn orlicz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).env_remove("ORLICZ_CONFIG").output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn json_ok(args: &[&str]) -> Value {
    let o = orlicz(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("json")
}

fn parse_csv(text: &str) -> Vec<(f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,value"));
    lines
        .map(|l| {
            let (t, v) = l.split_once(',').expect("two columns");
            (t.parse().unwrap(), v.parse().unwrap())
        })
        .collect()
}

#[test]
fn analyze_classical_power() {
    let v = json_ok(&["analyze", "-n", "3", "-m", "1", "--setting", "zero_boundary", "--target", "power(p=6)"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["kind"], "exists");
    assert_eq!(v["domain_asymptote"]["power"], 2.0);
    assert_eq!(v["domain_asymptote"]["log_power"], 0.0);
    assert_eq!(v["problem"]["gamma"], 3.0);
    assert_eq!(v["domain_asymptote_text"], "t^2");
}

#[test]
fn analyze_reports_other_verdicts() {
    let v = json_ok(&["analyze", "-n", "3", "-m", "1", "--setting", "zero_boundary", "--target", "linf"]);
    assert_eq!(v["kind"], "no_optimal");
    let v = json_ok(&["analyze", "-n", "2", "-m", "2", "--setting", "zero_boundary", "--target", "power(p=6)"]);
    assert_eq!(v["kind"], "trivial_L1");
    let v = json_ok(&[
        "analyze", "-n", "3", "-m", "1", "--setting", "zero_boundary", "--target", "power(p=6)", "--integral-form",
    ]);
    assert_eq!(v["integral_form"]["present"], true);
    let v = json_ok(&[
        "analyze", "-n", "3", "-m", "1", "--setting", "zero_boundary", "--target", "power(p=1.2)", "--integral-form",
    ]);
    assert_eq!(v["integral_form"]["present"], false);
    assert_eq!(v["integral_form"]["condition"], "Bz");
}

#[test]
fn analyze_validation_errors_exit_1() {
    for args in [
        &["analyze", "-n", "3", "-m", "1", "--setting", "nowhere", "--target", "power(p=6)"][..],
        &["analyze", "-n", "3", "-m", "1", "--setting", "measure", "--target", "power(p=6)"][..],
        &["analyze", "-n", "3", "-m", "1", "--setting", "measure", "--gamma", "1.5", "--target", "power(p=6)"][..],
        &["analyze", "-n", "3", "-m", "1", "--setting", "zero_boundary", "--target", "power(p=0.5)"][..],
    ] {
        let o = orlicz(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    }
}

#[test]
fn indices_of_square() {
    let v = json_ok(&["indices", "power(p=2)"]);
    for k in ["i_local", "I_local", "i_global", "I_global"] {
        assert_eq!(v[k], 2.0, "{k}");
    }
    assert_eq!(v["method"], "exact");
}

#[test]
fn indices_of_nested_glue() {
    let v = json_ok(&["indices", "glue(zero=power(p=2), inf=zygmund(q=3, a=0))"]);
    assert_eq!(v["i_local"], 3.0);
    assert_eq!(v["I_local"], 3.0);
}

#[test]
fn parse_error_position() {
    let o = orlicz(&["indices", "power(p=)"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("at byte 8"), "{err}");
    assert!(err.contains("number"), "{err}");
}

#[test]
fn bad_flags_exit_1() {
    assert_eq!(orlicz(&["indices"]).status.code(), Some(1));
    assert_eq!(orlicz(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(orlicz(&["--help"]).status.code(), Some(0));
    let o = orlicz(&["--per-decade", "4", "indices", "power(p=2)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("per_decade"));
    let o = orlicz(&["--grid-min", "2", "indices", "power(p=2)"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_examples_passes() {
    let v = json_ok(&["verify-examples"]);
    assert_eq!(v["passed"], true);
    let fixtures = v["fixtures"].as_array().unwrap();
    assert!(fixtures.len() >= 15);
    assert!(fixtures.iter().all(|f| f["passed"] == true));

    let o = orlicz(&["verify-examples", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("name,n,m,setting,target,expected,kind,passed\n"));
    assert_eq!(text.lines().count(), fixtures.len() + 1);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn construct_global_condition_failure_exits_2() {
    let o = orlicz(&["construct", "--alpha", THIRD, "--beta", "1", "--global", "power(p=1.2)"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Bzero"));
}

#[test]
fn construct_reports_asymptote() {
    let v = json_ok(&["construct", "--alpha", THIRD, "--beta", "1", "power(p=6)"]);
    assert_eq!(v["asymptote"]["power"], 2.0);
    assert_eq!(v["variant"], "finite_window");
    let t = v["t"].as_array().unwrap();
    assert_eq!(t.len(), v["value"].as_array().unwrap().len());
    let o = orlicz(&["construct", "--alpha", THIRD, "--beta", "1", "power(p=6)", "--global", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = parse_csv(&stdout(&o));
    assert!(rows.windows(2).all(|w| w[0].1 <= w[1].1));
}

#[test]
fn conjugate_formats() {
    let v = json_ok(&["conjugate", "power(p=2)"]);
    let t = v["t"].as_array().unwrap();
    let val = v["value"].as_array().unwrap();
    for (t, c) in t.iter().zip(val) {
        let (t, c) = (t.as_f64().unwrap(), c.as_f64().unwrap());
        assert!((c - t * t / 4.0).abs() <= 1e-9 * t * t, "{t}: {c}");
    }
    let o = orlicz(&["conjugate", "power(p=2)", "--format", "csv"]);
    let rows = parse_csv(&stdout(&o));
    assert_eq!(rows.len(), t.len());
}

#[test]
fn hardy_probe_document() {
    let v = json_ok(&[
        "hardy-probe", "--alpha", THIRD, "--beta", "1", "--domain", "power(p=2)", "--target", "power(p=6)", "--trials", "2",
    ]);
    assert_eq!(v["verdict"], "bounded");
    assert_eq!(v["target_norm"], "luxemburg");
    assert_eq!(v["depths"].as_array().unwrap().len(), 3);
    assert_eq!(v["deltas"].as_array().unwrap().len(), 2);
    assert!(v["trials"].as_array().unwrap().len() >= 2);
    let v = json_ok(&[
        "hardy-probe", "--alpha", THIRD, "--beta", "1", "--domain", "power(p=2)", "--target", "power(p=6)", "--trials", "1",
        "--weak",
    ]);
    assert_eq!(v["verdicts_agree"], true);
    assert_eq!(v["weak"]["target_norm"], "marcinkiewicz");
}

#[test]
fn emit_curve_is_lossless_and_increasing() {
    for what in ["eval", "inverse", "fundamental"] {
        let o = orlicz(&["emit-curve", "zygmund(q=2, a=1)", "--what", what]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let rows = parse_csv(&text);
        assert!(rows.len() > 100);
        assert!(rows.windows(2).all(|w| w[0].0 < w[1].0), "{what}");
        for line in text.lines().skip(1) {
            let (t, v) = line.split_once(',').unwrap();
            for field in [t, v] {
                let x: f64 = field.parse().unwrap();
                assert_eq!(format!("{x:.16e}"), field);
            }
        }
    }
    let rows = parse_csv(&stdout(&orlicz(&["emit-curve", "power(p=3)"])));
    for (t, v) in rows {
        assert!((v - t.powi(3)).abs() <= 1e-12 * t.powi(3));
    }
}

#[test]
fn output_is_deterministic() {
    let runs: [&[&str]; 3] = [
        &["hardy-probe", "--alpha", THIRD, "--beta", "1", "--domain", "power(p=1.9)", "--target", "power(p=6)", "--trials", "3", "--seed", "7"],
        &["construct", "--alpha", "0.5", "--beta", "1", "zygmund(q=4, a=1)"],
        &["analyze", "-n", "3", "-m", "1", "--setting", "zero_boundary", "--target", "exp_sqrt_log(q=2)"],
    ];
    for args in runs {
        let a = orlicz(args);
        let b = orlicz(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn config_file_env_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orlicz.toml");
    std::fs::write(&path, "per_decade = 8\ngrid_min = 1e-2\ngrid_max = 1e2\nformat = \"csv\"\n").unwrap();

    let run = |extra: &[&str], env: bool| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_orlicz"));
        c.env_remove("ORLICZ_CONFIG");
        if env {
            c.env("ORLICZ_CONFIG", &path);
        }
        c.args(extra).args(["emit-curve", "power(p=2)"]).output().unwrap()
    };
    let n_rows = |o: &Output| parse_csv(&stdout(o)).len();

    assert_eq!(n_rows(&run(&[], true)), 33);
    assert_eq!(n_rows(&run(&["--config", path.to_str().unwrap()], false)), 33);
    assert_eq!(n_rows(&run(&["--per-decade", "16"], true)), 65);
    assert!(n_rows(&run(&[], false)) > 33);

    let o = Command::new(env!("CARGO_BIN_EXE_orlicz"))
        .env("ORLICZ_CONFIG", &path)
        .args(["conjugate", "power(p=2)"])
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("t,value\n"));

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "per_decad = 8\n").unwrap();
    let o = orlicz(&["--config", bad.to_str().unwrap(), "indices", "linf"]);
    assert_eq!(o.status.code(), Some(1));
    let o = orlicz(&["--config", dir.path().join("missing.toml").to_str().unwrap(), "indices", "linf"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn table_spec_reads_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.csv");
    let mut text = String::from("t,value\n");
    for k in -40..=40 {
        let t = 10f64.powf(k as f64 / 4.0);
        text.push_str(&format!("{t:e},{:e}\n", t * t));
    }
    std::fs::write(&path, text).unwrap();
    let spec = format!("table(path=\"{}\")", path.display());
    let o = orlicz(&["emit-curve", &spec]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = orlicz(&["emit-curve", "table(path=\"/nonexistent/x.csv\")"]);
    assert_eq!(o.status.code(), Some(1));
}
