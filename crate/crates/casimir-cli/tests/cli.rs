use std::process::{Command, Output};

const BOLTZMANN: f64 = 1.380649e-23;
const ZETA3: f64 = 1.2020569031595942;

fn casimir(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_casimir"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_value(out: &str) -> f64 {
    let mut lines = out.lines();
    assert_eq!(
        lines.next(),
        Some("a_um,model,prescription,quantity,value,est_rel_error")
    );
    lines.next().unwrap().split(',').nth(4).unwrap().parse().unwrap()
}

#[test]
fn force_smoke_json() {
    let o = casimir(&[
        "force",
        "--geometry",
        "plate-plate",
        "--material",
        "Al-drude",
        "--prescription",
        "modified-sdm",
        "--a-um",
        "1",
        "--temp-k",
        "300",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let p = v["data"]["result"]["value"].as_f64().unwrap();
    assert!(p < 0.0);
    assert_eq!(v["data"]["result"]["unit"], "Pascal");
    assert!(v["meta"]["build"].is_string());
    assert!(v["meta"]["tolerances"]["quad"]["rel_tol"].is_number());
}

#[test]
fn ideal_sphere_high_temperature() {
    let o = casimir(&[
        "force",
        "--geometry",
        "sphere-plate",
        "--R-um",
        "100",
        "--a-um",
        "10",
        "--material",
        "ideal",
        "--temp-k",
        "300",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let f = csv_value(&stdout(&o));
    let (a, r) = (10e-6, 100e-6);
    let limit = -BOLTZMANN * 300.0 * r * ZETA3 / (4.0 * a * a);
    assert!(((f - limit) / limit).abs() < 2e-3, "{f} vs {limit}");
}

#[test]
fn ambiguous_drude_zero_frequency_is_a_config_error() {
    let o = casimir(&["force", "--material", "Al-drude", "--prescription", "raw"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ambiguous"), "{err}");
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(casimir(&["force", "--a-um", "-1"]).status.code(), Some(2));
    assert_eq!(casimir(&["force", "--material", "unobtainium"]).status.code(), Some(2));
    assert_eq!(casimir(&["force", "--rel-tol", "0.5"]).status.code(), Some(2));
    assert_eq!(
        casimir(&["force", "--config", "/nonexistent/run.toml"]).status.code(),
        Some(2)
    );
    assert_eq!(casimir(&["energy", "--R-um", "100"]).status.code(), Some(2));
}

#[test]
fn csv_output_is_byte_identical() {
    let args = [
        "sweep",
        "--quantity",
        "force",
        "--a-um",
        "0.5:2:4",
        "--material",
        "al-plasma",
    ];
    let a = casimir(&args);
    let b = casimir(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn dump_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let first = casimir(&[
        "--dump-config",
        "delta",
        "c",
        "--geometry",
        "sphere-plate",
        "--R-um",
        "50",
        "--a-um",
        "0.7",
        "--material",
        "al-plasma",
        "--prescription",
        "unit-reflection",
        "--temp-k",
        "77",
        "--rel-tol",
        "1e-8",
    ]);
    assert!(first.status.success());
    let path = dir.path().join("run.toml");
    std::fs::write(&path, &first.stdout).unwrap();
    let second = casimir(&["--dump-config", "--config", path.to_str().unwrap()]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&second);
    assert!(text.contains("[geometry]") && text.contains("[material]") && text.contains("[run]"));
}

#[test]
fn config_file_drives_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(
        &path,
        "[geometry]\nkind = \"plate-plate\"\na_um = 2.0\n\n[material]\nkind = \"plasma\"\nomega_p_ev = 12.5\n\n[run]\nprescription = \"modified-sdm\"\ntemperature_k = 300.0\nformat = \"csv\"\n",
    )
    .unwrap();
    let o = casimir(&["force", "--config", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    assert!(
        line.starts_with("2.000000000000e0,plasma,modified-sdm,force,"),
        "{line}"
    );
}

#[test]
fn log_sweep_has_fifty_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = casimir(&[
        "sweep",
        "--quantity",
        "delta-t",
        "--a-um",
        "0.1:10:50",
        "--log",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 50);
    let a: Vec<f64> = rows
        .iter()
        .map(|r| r.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert!((a[0] - 0.1).abs() < 1e-12 && (a[49] - 10.0).abs() < 1e-12);
    let ratio = a[1] / a[0];
    assert!(a.windows(2).all(|w| ((w[1] / w[0]) - ratio).abs() < 1e-9));
}

#[test]
fn table_layout() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t1.csv");
    let o = casimir(&[
        "table",
        "table1",
        "--format",
        "text",
        "--csv-out",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('*'))
        .skip(1)
        .map(|l| l.split_whitespace().collect())
        .collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.len() == 7));
    assert_eq!(rows[0][0], "0.100");
    assert_eq!(rows[8][0], "10.0");
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 1 + 9 * 6);
}

#[test]
fn coefficient_integral() {
    let o = casimir(&["coeff", "i1", "--gamma-tilde", "1"]);
    assert!(o.status.success());
    let line = stdout(&o).lines().nth(1).unwrap().to_string();
    let v: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 1.3844).abs() < 1e-4, "{v}");
}

#[test]
fn figure_data_is_columnar() {
    let o = casimir(&["figure", "fig8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("gamma_tilde,i1,i2"));
    assert!(text.lines().skip(1).all(|l| l.split(',').count() == 3));
    assert_eq!(casimir(&["figure", "fig9"]).status.code(), Some(2));
}
