use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qmonty::cli::{parse_strategy_file, verify_lines, CliError};
use qmonty::game::{open_operator, switch_operator, BuiltinStrategy, GameOperators, StrategyUnitary};
use qmonty::linalg::{basis_index, basis_trits};
use qmonty::ComplexMatrix;
use serde_json::Value;

fn qmonty(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qmonty")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn payoff_reference_values() {
    let out = qmonty(&["payoff", "--case", "1", "--noise", "0", "--gamma", "0"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["payoff"].as_f64(), Some(0.666666666667));

    let out = qmonty(&["payoff", "--state", "psi2", "--alice", "h", "--bob", "id", "--channel", "se", "--noise", "0.693147", "--gamma", "0"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["payoff"].as_f64(), Some(0.583333333333));

    let out = qmonty(&["payoff", "--case", "5", "--noise", "1", "--gamma", "0.7"]);
    assert_eq!(json(&out)["payoff"].as_f64(), Some(0.333333333333));

    let out = qmonty(&["payoff", "--case", "3", "--noise", "0", "--gamma", "pi/2"]);
    let v = json(&out);
    assert_eq!(v["payoff"].as_f64(), Some(1.0));
    assert_eq!(v["optimal_label"], "not_switch");
}

#[test]
fn payoff_json_key_order() {
    let out = qmonty(&["payoff", "--case", "2", "--noise", "0.5", "--gamma", "0.1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = [
        "payoff", "p_switch", "p_not_switch", "optimal_gamma", "optimal_label", "case", "state", "alice", "bob",
        "channel", "noise", "gamma", "a1", "a2",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("\"{k}\":")).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn case_flags_match_explicit_flags() {
    let explicit: [[&str; 4]; 7] = [
        ["psi1", "id", "id", "se"],
        ["psi1", "id", "m1", "se"],
        ["psi2", "id", "id", "se"],
        ["psi2", "h", "id", "se"],
        ["psi1", "id", "id", "gp"],
        ["psi2", "id", "id", "gp"],
        ["psi2", "h", "id", "gp"],
    ];
    let points = [("0", "0"), ("0.25", "0.3"), ("0.5", "0.9"), ("0.75", "1.2"), ("1", "pi/2")];
    for (i, [state, alice, bob, channel]) in explicit.iter().enumerate() {
        let case = (i + 1).to_string();
        for (noise, gamma) in points {
            let a = json(&qmonty(&["payoff", "--case", &case, "--noise", noise, "--gamma", gamma]));
            let b = json(&qmonty(&[
                "payoff", "--state", state, "--alice", alice, "--bob", bob, "--channel", channel, "--noise", noise,
                "--gamma", gamma,
            ]));
            for key in ["payoff", "p_switch", "p_not_switch", "optimal_gamma", "optimal_label"] {
                assert_eq!(a[key], b[key], "case {case} at ({noise}, {gamma}): {key}");
            }
        }
    }
}

#[test]
fn flag_errors_exit_2_without_stdout() {
    for args in [
        vec!["payoff", "--case", "1", "--bob", "m1", "--noise", "0", "--gamma", "0"],
        vec!["payoff", "--state", "psi1", "--channel", "gp", "--gamma", "0"],
        vec!["payoff", "--case", "1", "--noise", "0"],
        vec!["payoff", "--case", "1", "--noise", "abc", "--gamma", "0"],
        vec!["sweep", "--case", "1", "--noise-range", "0:1", "--gamma-range", "0:1:0.5"],
        vec!["verify", "--case", "eight"],
        vec!["frobnicate"],
    ] {
        let out = qmonty(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn domain_errors_exit_4() {
    for args in [
        vec!["payoff", "--case", "6", "--noise", "1.01", "--gamma", "0"],
        vec!["payoff", "--state", "psi1", "--channel", "se", "--noise", "-0.5", "--gamma", "0"],
        vec!["payoff", "--case", "1", "--noise", "inf", "--gamma", "0"],
        vec!["payoff", "--state", "psi1", "--channel", "se", "--a1", "0", "--noise", "1", "--gamma", "0"],
        vec!["sweep", "--case", "7", "--noise-range", "0:2:0.5", "--gamma-range", "0:1:0.5"],
        vec!["sweep", "--case", "1", "--noise-range", "-1:1:0.5", "--gamma-range", "0:1:0.5"],
        vec!["validate-channel", "--channel", "gp", "--noise", "1.5"],
    ] {
        let out = qmonty(&args);
        assert_eq!(out.status.code(), Some(4), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn sweep_grids() {
    let out = qmonty(&["sweep", "--case", "1", "--noise-range", "0:3:0.05", "--gamma-range", "0:1.5707963:0.05"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("noise,gamma,payoff\n"));
    assert!(text.ends_with('\n'));
    assert!(!text.contains('\r'));
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 61 * 32);
    assert_eq!(rows[0], "0,0,0.666666666667");
    assert!(rows[32].starts_with("0.05,0,"));
    assert!(rows.last().unwrap().starts_with("3,1.55,"));

    let out = qmonty(&["sweep", "--case", "4", "--noise-range", "0.5:0.5:1", "--gamma-range", "0:0:1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn sweep_case_seven_surface_peak() {
    let out = qmonty(&["sweep", "--case", "7", "--noise-range", "0:1:0.01", "--gamma-range", "0:1.5707963:0.01"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let max = text
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .fold(f64::MIN, f64::max);
    assert!((max - 0.515).abs() < 5e-4, "{max}");
    assert!(max <= (9.0 + 2.0 * 6f64.sqrt()) / 27.0 + 1e-12);
}

#[test]
fn sweep_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("surface.csv");
    let args = ["sweep", "--case", "6", "--noise-range", "0:1:0.1", "--gamma-range", "0:pi/2:pi/10"];
    let direct = qmonty(&args);
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.display().to_string();
    with_out.extend(["--out", &p]);
    let filed = qmonty(&with_out);
    assert!(filed.status.success());
    assert!(filed.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn explicit_sweep_with_custom_strategy_file() {
    let dir = tempfile::tempdir().unwrap();
    let m1 = write(dir.path(), "m1.json", "[[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]],[[1,0],[0,0],[0,0]]]");
    let args_file = ["sweep", "--state", "psi1", "--bob", &m1, "--channel", "se", "--noise-range", "0:2:0.5", "--gamma-range", "0:1.5:0.5"];
    let args_case = ["sweep", "--case", "2", "--noise-range", "0:2:0.5", "--gamma-range", "0:1.5:0.5"];
    assert_eq!(qmonty(&args_file).stdout, qmonty(&args_case).stdout);
}

#[test]
fn strategy_files() {
    let dir = tempfile::tempdir().unwrap();
    let id = write(dir.path(), "id.json", "[[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]");
    let parsed = parse_strategy_file(Path::new(&id)).unwrap();
    assert_eq!(parsed.matrix(), StrategyUnitary::identity().matrix());

    let m2 = write(dir.path(), "m2.json", "[[[0,0],[0,0],[1,0]],[[1,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]]]");
    let parsed = parse_strategy_file(Path::new(&m2)).unwrap();
    assert_eq!(parsed.matrix(), &BuiltinStrategy::M2.matrix());

    let doubled = write(dir.path(), "bad.json", "[[[2,0],[0,0],[0,0]],[[0,0],[1,0],[0,0]],[[0,0],[0,0],[1,0]]]");
    assert!(matches!(parse_strategy_file(Path::new(&doubled)), Err(CliError::NotUnitary(_))));
    let out = qmonty(&["payoff", "--state", "psi1", "--alice", &doubled, "--channel", "none", "--gamma", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not unitary"));

    let ragged = write(dir.path(), "ragged.json", "[[[1,0],[0,0]],[[0,0],[1,0]]]");
    let garbage = write(dir.path(), "garbage.json", "not json");
    for f in [&ragged, &garbage, &"/nonexistent/strategy.json".to_string()] {
        let out = qmonty(&["payoff", "--state", "psi1", "--bob", f, "--channel", "none", "--gamma", "0"]);
        assert_eq!(out.status.code(), Some(2), "{f}");
    }
}

#[test]
fn custom_state_file() {
    let dir = tempfile::tempdir().unwrap();
    // psi2 written out explicitly
    let s = 1.0 / 3f64.sqrt();
    let amps: Vec<[f64; 2]> = (0..27).map(|i| if [0, 4, 8].contains(&i) { [s, 0.0] } else { [0.0, 0.0] }).collect();
    let file = write(dir.path(), "psi2.json", &serde_json::to_string(&amps).unwrap());
    let a = json(&qmonty(&["payoff", "--state", &file, "--alice", "h", "--channel", "gp", "--noise", "0.3", "--gamma", "0.2"]));
    let b = json(&qmonty(&["payoff", "--case", "7", "--noise", "0.3", "--gamma", "0.2"]));
    assert_eq!(a["payoff"], b["payoff"]);
    assert_eq!(a["state"], "custom");

    let short = write(dir.path(), "short.json", "[[1,0],[0,0]]");
    assert_eq!(qmonty(&["payoff", "--state", &short, "--channel", "none", "--gamma", "0"]).status.code(), Some(2));
}

#[test]
fn verify_reports() {
    let out = qmonty(&["verify", "--case", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    for (i, line) in lines.iter().enumerate() {
        assert!(line.starts_with(&format!("case {}: max_err=", i + 1)), "{line}");
        assert!(line.ends_with(" pass"), "{line}");
    }

    let out = qmonty(&["verify", "--case", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let err: f64 = text.split("max_err=").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(err <= 1e-9);
}

#[test]
fn verify_flags_a_broken_opening_operator() {
    // drop the b = a branch: those states keep their opened register
    let canonical = open_operator();
    let mut entries = vec![num_complex::Complex64::default(); 27 * 27];
    for col in 0..27 {
        let (o, b, a) = basis_trits(col);
        let row = if b == a {
            basis_index(o, b, a).unwrap()
        } else {
            (0..27).find(|&r| canonical[(r, col)].re == 1.0).unwrap()
        };
        entries[row * 27 + col] = num_complex::Complex64::new(1.0, 0.0);
    }
    let broken = GameOperators::new(ComplexMatrix::new(27, 27, entries).unwrap(), switch_operator()).unwrap();
    let (text, pass) = verify_lines(&broken, &[3], None, None).unwrap();
    assert!(!pass);
    assert!(text.starts_with("case 3:") && text.trim_end().ends_with("fail"), "{text}");

    let (_, pass) = verify_lines(GameOperators::canonical(), &[3], None, None).unwrap();
    assert!(pass);
}

#[test]
fn threshold_commands() {
    let v = json(&qmonty(&["threshold", "--case", "1"]));
    assert_eq!(v["case"], 1);
    assert!((v["threshold"].as_f64().unwrap() - 0.69314718).abs() < 1e-8);

    let v = json(&qmonty(&["threshold", "--case", "6"]));
    assert!((v["threshold"].as_f64().unwrap() - 0.63397460).abs() < 1e-8);

    let out = qmonty(&["threshold", "--case", "5"]);
    assert_eq!(out.status.code(), Some(5));
    assert!(out.stdout.is_empty());

    let v = json(&qmonty(&["threshold", "--case", "1", "--lo", "0.5", "--hi", "0.9"]));
    assert!((v["threshold"].as_f64().unwrap() - std::f64::consts::LN_2).abs() < 1e-8);
}

#[test]
fn validate_channel_reports() {
    let out = qmonty(&["validate-channel", "--channel", "se", "--noise", "1.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.ends_with("pass")));
    assert!(qmonty(&["validate-channel", "--channel", "gp", "--noise", "1.0"]).status.success());
    assert!(qmonty(&["validate-channel", "--channel", "se", "--noise", "0.4", "--a1", "2", "--a2", "0.5"]).status.success());
}
