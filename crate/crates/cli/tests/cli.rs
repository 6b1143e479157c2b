use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley-gibbs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = run(args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cayley-gibbs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

struct Row {
    alpha: f64,
    wp: usize,
    flag: bool,
}

fn scan_rows(k: &str, lo: &str, hi: &str, steps: &str) -> (String, Vec<Row>) {
    let o = run(&[
        "scan",
        "--k",
        k,
        "--alpha-min",
        lo,
        "--alpha-max",
        hi,
        "--steps",
        steps,
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 7);
            Row {
                alpha: f[0].parse().unwrap(),
                wp: f[4].parse().unwrap(),
                flag: f[5] == "true",
            }
        })
        .collect();
    (text, rows)
}

#[test]
fn solve_k5_on_i3_has_five_rows() {
    let v = json(&[
        "solve",
        "--k",
        "5",
        "--card-a",
        "5",
        "--alpha",
        "3",
        "--restrict",
        "I3",
        "--format",
        "json",
    ]);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 5);
    assert!(sols.iter().all(|s| s["residual"].as_f64().unwrap() < 1e-9));
    assert!(sols
        .iter()
        .all(|s| s["memberships"].as_str().unwrap().contains("I3")));
    assert_eq!(v["coset_fields"].as_array().unwrap().len(), 4);
}

#[test]
fn solve_at_theta_zero_is_trivial() {
    let v = json(&[
        "solve", "--k", "2", "--card-a", "2", "--alpha", "1", "--format", "json",
    ]);
    let sols = v["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 1);
    for key in ["h1", "h2", "h3", "h4"] {
        assert_eq!(sols[0][key].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn solve_k6_below_threshold_has_only_zero() {
    let v = json(&[
        "solve",
        "--k",
        "6",
        "--card-a",
        "6",
        "--alpha",
        "1.5",
        "--restrict",
        "I3",
        "--format",
        "json",
    ]);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 1);
}

#[test]
fn solve_text_and_csv() {
    let o = run(&[
        "solve",
        "--k",
        "5",
        "--card-a",
        "5",
        "--alpha",
        "3",
        "--restrict",
        "i3",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("5 fixed point(s)"));
    let o = run(&[
        "solve",
        "--k",
        "5",
        "--card-a",
        "5",
        "--alpha",
        "3",
        "--restrict",
        "I3",
        "--format",
        "csv",
    ]);
    let text = stdout(&o);
    assert_eq!(
        text.lines().next().unwrap(),
        "index,h1,h2,h3,h4,residual,memberships"
    );
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn coupling_flags() {
    let o = run(&[
        "solve", "--k", "3", "--card-a", "1", "--j", "0.5", "--beta", "2", "--format", "json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["params"]["theta"].as_f64().unwrap() - 1f64.tanh()).abs() < 1e-12);

    let o = run(&[
        "solve", "--k", "3", "--card-a", "1", "--alpha", "2", "--j", "0.5", "--format", "json",
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["params"]["alpha"].as_f64().unwrap(), 2.0);

    assert_eq!(
        run(&["solve", "--k", "3", "--card-a", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn seed_gives_reproducible_output() {
    let args = [
        "solve", "--k", "3", "--card-a", "2", "--alpha", "0.2", "--seed", "7", "--format", "json",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn reduce_prints_canonical_polynomials() {
    let t5 = stdout(&run(&["reduce", "--k", "5"]));
    assert!(t5.contains("u^10 - alpha*u^9 + alpha^2*u^6 - alpha^2*u^4 + alpha*u - 1"));
    assert!(t5.contains("xi^4 - alpha*xi^3 - 3*xi^2 + 2*alpha*xi + alpha^2 + 1"));
    let v = json(&["reduce", "--k", "6", "--format", "json"]);
    assert_eq!(
        v["xi_poly"],
        "xi^5 - alpha*xi^4 - 4*xi^3 + 3*alpha*xi^2 + 3*xi + alpha^2 - alpha"
    );
    assert_eq!(
        v["quotient"],
        "u^10 - alpha*u^9 + u^8 - alpha*u^7 + u^6 + (alpha^2 - alpha)*u^5 + u^4 - alpha*u^3 + u^2 - alpha*u + 1"
    );
    assert_eq!(v["poly12_antipalindromic"], true);
    assert_eq!(v["quotient_palindromic"], true);
    assert_eq!(v["xi_identity"], true);
    let v = json(&["reduce", "--k", "2", "--format", "json"]);
    assert_eq!(v["xi_degree"], 1);
    assert_eq!(run(&["reduce", "--k", "1"]).status.code(), Some(2));
}

#[test]
fn reduce_k2_has_no_large_roots() {
    let (_, rows) = scan_rows("2", "1.01", "20", "50");
    assert!(rows.iter().all(|r| r.wp == 0));
}

#[test]
fn scan_k5_switches_near_critical_value() {
    let (text, rows) = scan_rows("5", "2.0", "4.0", "201");
    assert_eq!(
        text.lines().next().unwrap(),
        "alpha,k,n_alpha,N_alpha,wp_count,boundary_flag,max_residual"
    );
    assert_eq!(rows.len(), 201);
    assert!(rows.windows(2).all(|w| w[0].alpha < w[1].alpha));
    let first = rows.iter().position(|r| r.wp > 0).unwrap();
    assert!((rows[first].alpha - 2.65).abs() < 0.011);
    assert!(rows[..first].iter().all(|r| r.wp == 0));
    assert!(rows[first..].iter().all(|r| r.wp == 4));
}

#[test]
fn scan_k6_pattern() {
    let (_, rows) = scan_rows("6", "1.5", "4.0", "251");
    for r in rows.iter().filter(|r| !r.flag) {
        let expected = match r.alpha {
            a if a < 1.894 => 0,
            a if a < 2.0 => 4,
            a if a <= 3.0 => 2,
            _ => 4,
        };
        assert_eq!(r.wp, expected, "alpha {}", r.alpha);
    }
}

#[test]
fn scan_k3_is_empty() {
    let (_, rows) = scan_rows("3", "1.001", "30", "100");
    assert!(rows.iter().all(|r| r.wp == 0));
}

#[test]
fn scan_is_deterministic_and_mirrored() {
    let a = [
        "scan",
        "--k",
        "6",
        "--alpha-min",
        "1.5",
        "--alpha-max",
        "4",
        "--steps",
        "40",
    ];
    let first = run(&a).stdout;
    assert_eq!(first, run(&a).stdout);
    let csv = String::from_utf8(first).unwrap();
    let mut j = a.to_vec();
    j.extend(["--format", "json"]);
    let v = json(&j);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), csv.lines().count() - 1);
    let header: Vec<&str> = csv.lines().next().unwrap().split(',').collect();
    let keys: Vec<&str> = rows[0]
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    let mut sorted_header = header.clone();
    sorted_header.sort();
    let mut sorted_keys = keys.clone();
    sorted_keys.sort();
    assert_eq!(sorted_header, sorted_keys);
}

#[test]
fn scan_writes_file() {
    let path = tmp("scan.csv");
    let o = run(&[
        "scan",
        "--k",
        "5",
        "--alpha-min",
        "2",
        "--alpha-max",
        "3",
        "--steps",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn scan_exit_codes() {
    let bad_path = "/nonexistent-dir/for/sure/scan.csv";
    let o = run(&[
        "scan",
        "--k",
        "5",
        "--alpha-min",
        "2",
        "--alpha-max",
        "3",
        "--steps",
        "5",
        "--out",
        bad_path,
    ]);
    assert_eq!(o.status.code(), Some(3));
    for args in [
        [
            "scan",
            "--k",
            "5",
            "--alpha-min",
            "0",
            "--alpha-max",
            "3",
            "--steps",
            "5",
        ],
        [
            "scan",
            "--k",
            "5",
            "--alpha-min",
            "2",
            "--alpha-max",
            "3",
            "--steps",
            "1",
        ],
        [
            "scan",
            "--k",
            "5",
            "--alpha-min",
            "3",
            "--alpha-max",
            "2",
            "--steps",
            "5",
        ],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn critical_values() {
    for (k, want, tol) in [("4", 6.3716, 1e-3), ("5", 2.65, 1e-2), ("6", 1.89, 1e-2)] {
        let v = json(&["critical", "--k", k, "--format", "json"]);
        assert_eq!(v["outcome"]["status"], "critical");
        let a = v["outcome"]["alpha"].as_f64().unwrap();
        assert!((a - want).abs() < tol, "k={k} alpha={a}");
    }
    let v = json(&["critical", "--k", "3", "--format", "json"]);
    assert_eq!(v["outcome"]["status"], "no_transition");
    let t = stdout(&run(&["critical", "--k", "5"]));
    assert!(t.contains("branch minimum"));
}

#[test]
fn check_compat_on_solved_points() {
    let v = json(&[
        "check-compat",
        "--k",
        "2",
        "--card-a",
        "2",
        "--alpha",
        "3",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    for r in v.as_array().unwrap() {
        assert!(r["defect"].as_f64().unwrap() < 1e-10);
    }
    let v = json(&[
        "check-compat",
        "--k",
        "2",
        "--card-a",
        "1",
        "--alpha",
        "0.2",
        "--n",
        "2",
        "--format",
        "json",
    ]);
    assert!(v.as_array().unwrap().len() > 1);
    for r in v.as_array().unwrap() {
        assert!(r["defect"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn check_compat_explicit_vector() {
    let v = json(&[
        "check-compat",
        "--k",
        "2",
        "--card-a",
        "2",
        "--alpha",
        "0.2",
        "--n",
        "1",
        "--h",
        "0.5,0.1,-0.3,0.2",
        "--format",
        "json",
    ]);
    assert!(v[0]["defect"].as_f64().unwrap() > 1e-5);
    let v = json(&[
        "check-compat",
        "--k",
        "2",
        "--card-a",
        "2",
        "--alpha",
        "0.2",
        "--n",
        "1",
        "--h",
        "0.5,0.1,-0.3,0.2",
        "--root-rule",
        "recursion",
        "--format",
        "json",
    ]);
    assert!(v[0]["defect"].as_f64().unwrap() < 1e-12);
    let o = run(&[
        "check-compat",
        "--k",
        "5",
        "--card-a",
        "5",
        "--alpha",
        "3",
        "--n",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_command() {
    let v = json(&["classify", "--k", "6", "--alpha", "4.1", "--format", "json"]);
    assert_eq!(v["N_alpha"], 5);
    assert_eq!(v["wp_count"], 4);
    assert_eq!(v["boundary_flag"], false);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 5);
}

#[test]
fn check_compat_rejects_short_vector() {
    let o = run(&[
        "check-compat",
        "--k",
        "2",
        "--card-a",
        "2",
        "--alpha",
        "0.2",
        "--n",
        "1",
        "--h",
        "0.5,0.1",
    ]);
    assert_eq!(o.status.code(), Some(2));
}
