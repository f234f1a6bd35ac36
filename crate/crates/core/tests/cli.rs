use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_ising-fidelity"));
    c.env_remove("FIDELITY_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn csv_rows(bytes: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(bytes);
    let headers = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|s| s.parse().unwrap_or(f64::NAN)).collect())
        .collect();
    (headers, rows)
}

#[test]
fn fidelity_json_keys() {
    let v = json(&["fidelity", "--size", "200000", "--g", "1.0", "--delta", "1e-4"]);
    for k in ["n", "g", "delta", "log_fidelity", "fidelity", "per_site"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["n"], 200000);
    let l = v["log_fidelity"].as_f64().unwrap();
    assert!((l + 4.6533).abs() < 1e-3, "{l}");
}

#[test]
fn zero_delta_is_unit_fidelity() {
    let v = json(&["fidelity", "--size", "100", "--g", "2.0", "--delta", "0"]);
    assert_eq!(v["fidelity"].as_f64(), Some(1.0));
}

#[test]
fn oracle_flag_matches_product() {
    let v = json(&["fidelity", "--size", "8", "--g", "1.1", "--delta", "0.05", "--oracle"]);
    let (f, o) = (v["fidelity"].as_f64().unwrap(), v["oracle_fidelity"].as_f64().unwrap());
    assert!((f - o).abs() < 1e-10);
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["fidelity", "--size", "7", "--g", "1", "--delta", "0.1"]), 2);
    assert_eq!(
        code(&["fidelity", "--size", "8", "--g", "0.1", "--delta", "0.05", "--oracle"]),
        2
    );
    assert_eq!(
        code(&["fidelity", "--size", "14", "--g", "1", "--delta", "0.05", "--oracle"]),
        2
    );
    assert_eq!(code(&["crossover", "--delta-list", "1e-3"]), 2);
    assert_eq!(
        code(&["crossover", "--delta-list", "1e-3,1e-4,1e-5", "--g-mode", "5"]),
        4
    );
    assert_eq!(code(&["scan", "--axis", "size", "--grid", "10:100:5:linear"]), 2);
    assert_eq!(
        code(&[
            "scaling-function",
            "--c-min",
            "0",
            "--c-max",
            "1",
            "--points",
            "3",
            "--numeric"
        ]),
        2
    );
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn garbage_flags_never_crash() {
    for args in [
        &["fidelity", "--size", "-3", "--g", "1", "--delta", "0"][..],
        &["fidelity", "--size", "8", "--g", "nan", "--delta", "0.1"],
        &["fidelity", "--size", "8", "--g", "1", "--delta", "inf"],
        &["scan", "--axis", "sideways", "--grid", "1:2:3:linear"],
        &[
            "scan",
            "--axis",
            "g",
            "--grid",
            "1:2:x:linear",
            "--size",
            "10",
            "--delta",
            "0.1",
        ],
        &[
            "scan",
            "--axis",
            "delta",
            "--grid",
            "1e-3:1e-1:3:geometric",
            "--size",
            "9",
        ],
        &["scaling-function", "--c-min", "2", "--c-max", "1", "--points", "3"],
        &["scaling-function", "--c-min", "0", "--c-max", "1", "--points", "0"],
        &["--format", "xml", "check"],
        &[],
    ] {
        let code = run(args).status.code();
        assert!(matches!(code, Some(2..=4)), "{args:?} gave {code:?}");
    }
}

#[test]
fn bad_thread_variable() {
    let out = bin()
        .env("FIDELITY_THREADS", "zero")
        .args(["fidelity", "--size", "10", "--g", "1", "--delta", "0.1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = bin()
        .env("FIDELITY_THREADS", "2")
        .args(["fidelity", "--size", "10", "--g", "1", "--delta", "0.1"])
        .output()
        .unwrap();
    assert!(ok.status.success());
}

#[test]
fn scaling_function_csv() {
    let out = run(&[
        "scaling-function",
        "--c-min",
        "-3",
        "--c-max",
        "3",
        "--points",
        "25",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    assert!(!out.stdout.contains(&b'\r'));
    let (headers, rows) = csv_rows(&out.stdout);
    assert_eq!(headers, ["c", "a_analytic", "da_dc"]);
    assert_eq!(rows.len(), 25);
    assert_eq!(rows[12][0], 0.0);
    assert!((rows[12][1] - 0.25).abs() < 1e-14);
    assert!((rows[16][1] - (std::f64::consts::PI - 2.0) / (4.0 * std::f64::consts::PI)).abs() < 1e-14);
}

#[test]
fn scaling_function_numeric_columns() {
    let out = run(&[
        "scaling-function",
        "--c-min",
        "2",
        "--c-max",
        "3",
        "--points",
        "3",
        "--numeric",
        "--size",
        "200000",
        "--delta",
        "1e-4",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let (headers, rows) = csv_rows(&out.stdout);
    assert_eq!(headers, ["c", "a_analytic", "da_dc", "a_numeric", "residual"]);
    assert!(rows.iter().all(|r| r[4].abs() < 1e-3));
}

#[test]
fn scan_csv_round_trips_and_is_deterministic() {
    let args = [
        "scan",
        "--axis",
        "size",
        "--grid",
        "1e2:1e7:12:geometric",
        "--delta",
        "1e-4",
        "--g-mode",
        "critical",
        "--format",
        "csv",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let (headers, rows) = csv_rows(&a.stdout);
    assert_eq!(headers, ["x", "log_fidelity", "per_site", "local_slope"]);
    // Every cell re-emits to the same text.
    let text = String::from_utf8(a.stdout).unwrap();
    for (line, row) in text.lines().skip(1).zip(&rows) {
        let re: Vec<String> = row.iter().map(|x| format!("{x:.16e}")).collect();
        assert_eq!(line, re.join(","));
    }
    let first = rows.first().unwrap()[3];
    let last = rows.last().unwrap()[3];
    assert!(
        (first - 2.0).abs() < 0.05 && (last - 1.0).abs() < 0.05,
        "{first} {last}"
    );
}

#[test]
fn scan_delta_axis() {
    let out = run(&[
        "scan",
        "--axis",
        "delta",
        "--grid",
        "1e-7:1e-2:10:geometric",
        "--size",
        "100000",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let (_, rows) = csv_rows(&out.stdout);
    assert!((rows[0][3] - 2.0).abs() < 0.05);
    assert!((rows[9][3] - 1.0).abs() < 0.05);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    let out = run(&[
        "fidelity",
        "--size",
        "10",
        "--g",
        "1",
        "--delta",
        "0.1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    assert_eq!(v["n"], 10);
}

#[test]
fn crossover_fit() {
    let v = json(&[
        "crossover",
        "--delta-list",
        "1e-3,3e-4,1e-4,3e-5",
        "--g-mode",
        "plus-5delta",
    ]);
    let b = v["fit"]["b"].as_f64().unwrap();
    assert!((0.985..=1.005).contains(&b), "{b}");
    assert_eq!(v["points"].as_array().unwrap().len(), 4);
    assert!(v["points"][0]["n_three_halves"].as_f64().unwrap() > 0.0);
}
