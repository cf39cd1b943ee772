use std::f64::consts::{LN_2, PI};
use std::process::{Command, Output};

fn logint(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logint"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn table(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn lnx_columns() {
    let (header, rows) = table(&logint(&["lnx", "1", "2", "1e6"]));
    assert_eq!(header, ["x", "ln_quadrature", "ln_builtin", "abs_diff"]);
    assert_eq!(rows[0][3], 0.0);
    assert!((rows[1][1] - LN_2).abs() < 1e-9 && (rows[1][2] - LN_2).abs() < 1e-9);
    assert!(rows[2][3] <= 1e-9);
}

#[test]
fn cauchy_rows_and_units() {
    let (_, nats) = table(&logint(&["cauchy", "--n-max", "6"]));
    assert!((nats[0][1] - (4.0 * PI).ln()).abs() < 1e-8);
    assert!(nats.windows(2).all(|w| w[1][2] < w[0][2]));
    let (_, bits) = table(&logint(&["--units", "bits", "cauchy", "--n-max", "2"]));
    assert!((bits[1][1] - nats[1][1] / LN_2).abs() < 1e-8);
}

#[test]
fn simo_sweep() {
    let (header, rows) = table(&logint(&["simo", "--snr-db", "-10:30:5", "--with-variance"]));
    assert_eq!(header, ["snr_db", "capacity", "variance"]);
    assert_eq!(rows.len(), 9);
    assert_eq!(rows[8][0], 30.0);
    assert!(rows.iter().all(|r| r[2] >= 0.0));
    assert!(rows.windows(2).all(|w| w[1][1] > w[0][1]));
    let (_, cf) = table(&logint(&["simo", "--sigma-sq", "1", "--snr-db", "0"]));
    // one unit antenna at 0 dB: e·E1(1)
    assert!((cf[0][1] - 0.596_347_362_323_194).abs() < 1e-8);
}

#[test]
fn avs_rows() {
    let (_, rows) = table(&logint(&["avs", "--n-max", "3"]));
    assert!((rows[0][1] - 0.5).abs() < 1e-9 && rows[0][2].abs() < 1e-9);
    assert!((rows[1][1] - 0.602).abs() < 5e-4);
}

#[test]
fn empent_in_bits() {
    let (header, rows) = table(&logint(&["--units", "bits", "empent", "--n", "1,100,1000"]));
    assert_eq!(header, ["n", "entropy_minus_mean", "std_dev"]);
    assert_eq!((rows[0][1], rows[0][2]), (1.0, 0.0));
    assert!((rows[1][1] - 7.25e-3).abs() < 7.25e-5);
    assert!((rows[2][1] - 7.217e-4).abs() < 3.6e-6);
    assert!(rows[2][2] < rows[1][2]);
}

#[test]
fn kt_rows() {
    let (_, rows) = table(&logint(&["kt", "--n-max", "20"]));
    assert_eq!(rows[0][2], 0.0);
    assert!(rows.iter().all(|r| r[2] >= 0.0));
    assert!((rows[1][1] - 2f64.ln()).abs() < 1e-9);
}

#[test]
fn precision_and_output_file() {
    let out = logint(&["--precision", "3", "lnx", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x,ln_quadrature,ln_builtin,abs_diff\n2,0.693,0.693,0.000\n");
    let path = std::env::temp_dir().join(format!("logint-cli-{}.csv", std::process::id()));
    let out = logint(&["lnx", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.starts_with("x,ln_quadrature") && written.lines().count() == 2);
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_logint"))
            .args(["kt", "--n-max", "40"])
            .env("LOGINT_THREADS", threads)
            .output()
            .unwrap()
    };
    let (one, many) = (run("1"), run("8"));
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(run("zero").status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(logint(&["lnx", "-1"]).status.code(), Some(1));
    assert_eq!(logint(&["--precision", "18", "lnx", "2"]).status.code(), Some(1));
    assert_eq!(logint(&["simo", "--snr-db", "5:0:1"]).status.code(), Some(1));
    assert_eq!(logint(&["empent", "--probs", "0.5,0.4"]).status.code(), Some(1));
    assert_eq!(logint(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(logint(&["--help"]).status.code(), Some(0));
}

#[test]
fn validate_is_reproducible() {
    let args = ["validate", "--suite", "core", "--trials", "20000", "--seed", "3"];
    let (a, b) = (logint(&args), logint(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let report = String::from_utf8(a.stdout).unwrap();
    assert!(report.starts_with("# suite=core trials=20000 seed=3\n"));
    assert!(!report.contains("FAIL"));
}

#[test]
fn injected_fault_fails_with_named_check() {
    let out = logint(&["validate", "--suite", "core", "--trials", "1000", "--inject-fault", "e1"]);
    assert_eq!(out.status.code(), Some(3));
    let report = String::from_utf8(out.stdout).unwrap();
    assert!(report.lines().any(|l| l.starts_with("e1_recurrence") && l.contains("FAIL")));
}
