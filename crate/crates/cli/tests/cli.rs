use std::process::{Command, Output};

use otto_core::Table;

fn otto(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otto"))
        .args(args)
        .output()
        .expect("failed to launch otto")
}

fn stdout(args: &[&str]) -> String {
    let out = otto(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn cell(table: &Table, row: usize, col: &str) -> f64 {
    table.rows[row][table.column(col).unwrap()]
        .as_f64()
        .unwrap()
}

#[test]
fn params_defaults_are_nmr() {
    let t = Table::from_csv(&stdout(&["params"])).unwrap();
    assert!((cell(&t, 0, "theta_c") - 0.5169584620755004).abs() < 1e-12);
    assert!((cell(&t, 0, "theta_h") - 3.618709234528503).abs() < 1e-12);
    assert!((cell(&t, 0, "eta_carnot") - 0.3).abs() < 1e-12);
}

#[test]
fn outputs_repeat_byte_for_byte() {
    let runs: [&[&str]; 6] = [
        &["verify", "--draws", "200", "--seed", "11"],
        &[
            "region-map",
            "--grid",
            "r=0:2:0.25",
            "--grid",
            "xi=0:0.4:0.1",
        ],
        &[
            "efficiency-sweep",
            "--mode",
            "fixed-exact",
            "--grid",
            "r=0:2:0.1",
        ],
        &["compare-ho", "--format", "json"],
        &["xi", "--tau-ms", "0:0.3:0.1"],
        &["optimize", "--xi", "0.1"],
    ];
    for args in runs {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn verify_prints_one_line() {
    let text = stdout(&["verify", "--draws", "1", "--seed", "3"]);
    assert_eq!(text.lines().count(), 1);
    assert!(text.trim_end().ends_with("status=PASS"));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        &["params", "--omega-ratio", "0.5"][..],
        &["params", "--r", "-1"],
        &["cycle", "--xi", "1.5"],
        &["region-map", "--grid", "r=1:0:0.1"],
        &["region-map", "--grid", "q=0:1:0.1"],
        &["efficiency-sweep", "--format", "xml"],
        &["cycle", "--xi", "0.1", "--tau-ms", "0.2"],
    ] {
        assert_eq!(otto(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn non_convergence_exits_3_after_writing_rows() {
    let out = otto(&["xi", "--tau-ms", "0.2", "--max-steps", "1024"]);
    assert_eq!(out.status.code(), Some(3));
    let t = Table::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0][3], otto_core::Value::Bool(false));
}

#[test]
fn config_file_sits_between_defaults_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("engine.cfg");
    std::fs::write(&cfg, "# hotter cold bath\nenergy_scale_pev = 20\nr = 2\n").unwrap();
    let cfg = cfg.to_str().unwrap();

    let t = Table::from_csv(&stdout(&["params", "--config", cfg])).unwrap();
    assert!((cell(&t, 0, "beta_c") - 0.05).abs() < 1e-15);
    assert_eq!(cell(&t, 0, "r"), 2.0);

    let t = Table::from_csv(&stdout(&["params", "--config", cfg, "--r", "0.5"])).unwrap();
    assert_eq!(cell(&t, 0, "r"), 0.5);
    assert!((cell(&t, 0, "beta_c") - 0.05).abs() < 1e-15);

    std::fs::write(dir.path().join("bad.cfg"), "colour = red\n").unwrap();
    let bad = dir.path().join("bad.cfg");
    assert_eq!(
        otto(&["params", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn written_csv_reads_back() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fig5.csv");
    let p = path.to_str().unwrap();
    stdout(&[
        "efficiency-sweep",
        "--mode",
        "fixed-exact",
        "--grid",
        "r=0:2:0.05",
        "--out",
        p,
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    let table = Table::from_csv(&text).unwrap();
    assert_eq!(table.to_csv().unwrap(), text);
    assert_eq!(table.rows.len(), 41 * 4);
    // r = 1, ξ = 0.2
    let row = table
        .rows
        .iter()
        .position(|r| r[0].as_f64() == Some(1.0) && r[1].as_f64() == Some(0.2))
        .unwrap();
    assert!((cell(&table, row, "eta") - 0.79828).abs() < 1e-4);
}

#[test]
fn cycle_routes_agree() {
    let t = Table::from_csv(&stdout(&["cycle", "--xi", "0.1"])).unwrap();
    for col in ["q_hot", "q_cold", "w_net", "eta"] {
        let (a, b) = (cell(&t, 0, col), cell(&t, 1, col));
        assert!((a - b).abs() <= 1e-9 * a.abs(), "{col}: {a} vs {b}");
    }
    assert!((cell(&t, 0, "eta") - 0.86475).abs() < 1e-4);
}
