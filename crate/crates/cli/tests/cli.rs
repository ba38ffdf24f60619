use std::process::{Command, Output};

fn isosusy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isosusy"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn column(csv: &str, idx: usize) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(idx).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn half_line_at_origin_is_odd_oscillator() {
    let o = isosusy(&["spectrum", "half-line", "--b", "0", "--levels", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("n,epsilon,energy,parity"));
    assert_eq!(column(&out, 2), vec![1.5, 3.5, 5.5]);
}

#[test]
fn isotonic_ground_state() {
    let o = isosusy(&["spectrum", "isotonic", "--a", "1", "--region", "R2", "--levels", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let eps = column(&out, 1)[0];
    let e = column(&out, 2)[0];
    assert!((e - 0.5 * (-eps - 2.5)).abs() < 1e-14);
    assert!((e - 1.200565800736).abs() < 1e-9);
}

#[test]
fn hs4_levels_are_exchange_symmetric() {
    let o = isosusy(&[
        "spectrum", "2d", "--system", "hs4", "--region", "R2,R2", "--nmax", "1", "--kmax", "1",
    ]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows: Vec<Vec<&str>> = out.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let energy = |n: &str, k: &str| rows.iter().find(|r| r[0] == n && r[1] == k).unwrap()[3];
    assert_eq!(energy("0", "1"), energy("1", "0"));
}

#[test]
fn sweeps_are_monotone_and_deterministic() {
    let args = [
        "sweep",
        "--case",
        "II",
        "--b-from",
        "0",
        "--b-to",
        "3",
        "--b-steps",
        "60",
        "--levels",
        "11",
    ];
    let first = stdout(&isosusy(&args));
    assert_eq!(first.lines().count(), 62);
    for n in 1..=11 {
        let col = column(&first, n);
        assert!(col.windows(2).all(|w| w[1] > w[0]), "E_{} not increasing", n - 1);
    }
    assert_eq!(first, stdout(&isosusy(&args)));

    let out = stdout(&isosusy(&[
        "sweep",
        "--case",
        "III",
        "--b-from",
        "0.2",
        "--b-to",
        "3",
        "--b-steps",
        "56",
        "--levels",
        "11",
    ]));
    for n in 1..=11 {
        let col = column(&out, n);
        assert!(col.windows(2).all(|w| w[1] < w[0]), "E_{} not decreasing", n - 1);
    }
}

#[test]
fn ground_state_samples() {
    let out = stdout(&isosusy(&["sweep", "--case", "II", "--wavefunction", "0", "--b", "1"]));
    let z = column(&out, 0);
    let psi = column(&out, 1);
    assert_eq!(z[0], 1.0);
    let peak = psi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    assert!(psi[0].abs() <= 1e-8 * peak);
    assert!(psi[1..].iter().all(|&v| v >= 0.0) || psi[1..].iter().all(|&v| v <= 0.0));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# oscillator\nhbar = 2\nomega = 3 # rad/s\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let out = stdout(&isosusy(&[
        "--config",
        cfg,
        "spectrum",
        "half-line",
        "--b",
        "0",
        "--levels",
        "1",
    ]));
    assert_eq!(column(&out, 2), vec![9.0]);
    let out = stdout(&isosusy(&[
        "--config",
        cfg,
        "--omega",
        "1",
        "spectrum",
        "half-line",
        "--b",
        "0",
        "--levels",
        "1",
    ]));
    assert_eq!(column(&out, 2), vec![3.0]);
    let out = stdout(&isosusy(&[
        "--config",
        cfg,
        "--units",
        "natural",
        "spectrum",
        "half-line",
        "--b",
        "0",
        "--levels",
        "1",
    ]));
    assert_eq!(column(&out, 2), vec![1.5]);
}

#[test]
fn json_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("levels.json");
    let o = isosusy(&[
        "--format",
        "json",
        "-o",
        path.to_str().unwrap(),
        "spectrum",
        "box",
        "--b",
        "1",
        "--levels",
        "2",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["params"]["hbar"], 1.0);
    assert_eq!(doc["levels"].as_array().unwrap().len(), 2);
    assert_eq!(doc["levels"][1]["parity"], "odd");
    assert_eq!(doc["levels"][0]["energy"], 2.5);
}

#[test]
fn exit_codes() {
    assert_eq!(isosusy(&["spectrum", "box", "--levels", "2"]).status.code(), Some(1));
    assert_eq!(
        isosusy(&["spectrum", "box", "--b", "0.01", "--levels", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        isosusy(&["--hbar", "-1", "spectrum", "box", "--b", "1", "--levels", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(isosusy(&["verify", "--suite", "nope"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "mass = 1\n").unwrap();
    let o = isosusy(&[
        "--config",
        bad.to_str().unwrap(),
        "spectrum",
        "box",
        "--b",
        "1",
        "--levels",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(o.stdout.is_empty());
    assert!(!o.stderr.is_empty());
    // a wall this far out leaves U beyond the reach of both expansions
    let o = isosusy(&["spectrum", "half-line", "--b", "-40", "--levels", "2"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let o = isosusy(&["verify", "--suite", "specfun"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("6 of 6 checks passed"));
    let o = isosusy(&["verify", "--suite", "specfun", "--negative-control"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL specfun: Weber residual"));
}

#[test]
fn report_flags_the_mismatch() {
    let out = stdout(&isosusy(&["report"]));
    assert!(out.contains("formal_matches_physical false"));
    assert!(out.contains("hs4,"));
}
