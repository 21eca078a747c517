use std::process::Command;

use scscc_cli::config::parse_config_with_seed;
use scscc_cli::run;

const SMALL: &str = r#"
[run]
name = "small"
seed = 7
chunk_blocks = 20
[ebno]
grid = [1.0, 2.0]
[stop]
min_errors = 20
max_bits = 4000
[[scenario]]
K = 32
W = 4
m = 1
I_W = 2
[[scenario]]
uncoupled = true
K = 64
I_W = 4
"#;

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn repeated_runs_write_identical_results() {
    let config = parse_config_with_seed(SMALL, 1).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let sa = run(&config, a.path(), |_| {}).unwrap();
    let sb = run(&config, b.path(), |_| {}).unwrap();
    assert!(sa.success() && sb.success());
    assert_eq!(sa.points, 4);
    let ca = std::fs::read(&sa.csv).unwrap();
    let cb = std::fs::read(&sb.csv).unwrap();
    assert_eq!(ca, cb);
    assert_eq!(
        std::fs::read(&sa.dat).unwrap(),
        std::fs::read(&sb.dat).unwrap()
    );
}

#[test]
fn csv_records_points_and_configuration() {
    let config = parse_config_with_seed(SMALL, 1).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let s = run(&config, dir.path(), |_| {}).unwrap();
    let text = std::fs::read_to_string(&s.csv).unwrap();
    assert!(text.lines().any(|l| l == "# seed = 7"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 4);
    for r in &rows {
        assert_eq!(r.len(), scscc_cli::run::CSV_COLUMNS.len());
        let bits: u64 = r[11].parse().unwrap();
        let errors: u64 = r[12].parse().unwrap();
        let ber: f64 = r[14].parse().unwrap();
        assert!(bits >= 4000 || errors >= 20);
        assert!((ber - errors as f64 / bits as f64).abs() <= 1e-11 * ber.max(1e-300));
    }
    assert_eq!(rows[2][5], "true");
    let dat = std::fs::read_to_string(&s.dat).unwrap();
    assert_eq!(dat.matches("\n\n\n").count(), 1);
    let timing = std::fs::read_to_string(&s.timing).unwrap();
    assert_eq!(data_rows(&timing).len(), 4);
    assert!(s.required.is_none());
}

#[test]
fn seed_changes_results() {
    let a = parse_config_with_seed(SMALL, 1).unwrap();
    let mut b = a.clone();
    b.seed = 8;
    let da = tempfile::tempdir().unwrap();
    let db = tempfile::tempdir().unwrap();
    let sa = run(&a, da.path(), |_| {}).unwrap();
    let sb = run(&b, db.path(), |_| {}).unwrap();
    let ra = data_rows(&std::fs::read_to_string(&sa.csv).unwrap());
    let rb = data_rows(&std::fs::read_to_string(&sb.csv).unwrap());
    assert_ne!(ra, rb);
}

#[test]
fn binary_runs_a_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_scscc"))
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("res"))
        .args(["--threads", "1", "--max-bits", "2000"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("res/small.csv")).unwrap();
    assert!(csv.contains("# max_bits = 2000"));
    assert_eq!(data_rows(&csv).len(), 4);
}

#[test]
fn binary_reports_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "[ebno]\ngrid = [1.0]\n[[scenario]]\nK = 100\nW = 8\nm = 6\nI_W = 1\n",
    )
    .unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_scscc"))
        .arg("--config")
        .arg(&cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("scenario[0].m"), "{err}");

    let out = Command::new(env!("CARGO_BIN_EXE_scscc"))
        .args(["--preset", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn binary_lists_presets() {
    let out = Command::new(env!("CARGO_BIN_EXE_scscc"))
        .arg("--list-presets")
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for name in ["fig5a", "fig7", "fig9", "fig10b"] {
        assert!(text.contains(name));
    }
}
