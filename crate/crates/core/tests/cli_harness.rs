use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use twistred::cli::{run, CommandKind, Status};
use twistred::config::{RunConfig, SpectrumSpec};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("twistred-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn with_out(mut cfg: RunConfig, dir: &std::path::Path) -> RunConfig {
    cfg.out_dir = Some(dir.to_string_lossy().into_owned());
    cfg
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_twistred"));
    c.stdout(std::process::Stdio::null()).stderr(std::process::Stdio::null());
    c
}

fn write_config(dir: &std::path::Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, body).unwrap();
    p
}

fn read_csv(path: PathBuf) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(|s| s.parse().unwrap()).collect()).collect()
}

#[test]
fn hamiltonian_forms_agree_and_vanish_spin_part_at_zero_xi() {
    let dir = scratch("ham");
    let mut cfg = with_out(RunConfig::new("A", 2, vec![2.0, 2.0]), &dir);
    cfg.xi_scale = 0.0;
    let o = run(CommandKind::Hamiltonian, &cfg).unwrap();
    assert_eq!(o.status, Status::Pass);
    let dev = o.metadata["results"]["max_deviation"].as_f64().unwrap();
    assert!(dev < 1e-12, "{dev}");
}

#[test]
fn malformed_couplings_exit_with_validation_code() {
    let dir = scratch("bad");
    let cfg = write_config(&dir, r#"{"schema_version":1,"algebra":{"family":"A","rank":1},"lambdas":[1.0,2.0]}"#);
    let st = bin().args(["hamiltonian", "--config"]).arg(&cfg).arg("--out").arg(&dir).status().unwrap();
    assert_eq!(st.code(), Some(1));

    let cfg = write_config(&dir, r#"{"schema_version":1,"algebra":{"family":"A","rank":1},"lambdas":[1.0],"extra":3}"#);
    let st = bin().args(["algebra", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(st.code(), Some(1));

    let cfg = write_config(&dir, r#"{"schema_version":7,"algebra":{"family":"A","rank":1},"lambdas":[1.0]}"#);
    let st = bin().args(["algebra", "--config"]).arg(&cfg).status().unwrap();
    assert_eq!(st.code(), Some(1));
}

#[test]
fn simulate_without_spin_moves_linearly() {
    let dir = scratch("lin");
    let mut cfg = with_out(RunConfig::new("A", 2, vec![1.0]), &dir);
    cfg.xi_scale = 0.0;
    cfg.p_scale = 0.05;
    cfg.time_grid.t_end = 0.5;
    let o = run(CommandKind::Simulate, &cfg).unwrap();
    assert_eq!(o.status, Status::Pass);
    let rows = read_csv(dir.join("projection.csv"));
    let (q0, p0) = (&rows[0][1..3], &rows[0][3..5]);
    for row in &rows {
        let t = row[0];
        for i in 0..2 {
            assert!((row[1 + i] - q0[i] - t * p0[i]).abs() < 1e-10);
            assert!((row[3 + i] - p0[i]).abs() < 1e-12);
        }
    }
}

#[test]
fn simulate_default_su2_two_sites_passes() {
    let dir = scratch("sim");
    let cfg = with_out(RunConfig::new("A", 1, vec![2.0, 2.0]), &dir);
    let o = run(CommandKind::Simulate, &cfg).unwrap();
    assert_eq!(o.status, Status::Pass);
    let r = &o.metadata["results"];
    assert!(r["max_q_deviation"].as_f64().unwrap() < 1e-6);
    assert_eq!(read_csv(dir.join("integrated.csv")).len(), 21);
}

#[test]
fn simulate_reports_wall_hits_as_non_generic() {
    let dir = scratch("wall");
    let mut cfg = with_out(RunConfig::new("A", 1, vec![1.0]), &dir);
    cfg.xi_scale = 0.0;
    cfg.p_scale = 3.0;
    cfg.time_grid.t_end = 10.0;
    cfg.time_grid.steps = 40;
    let o = run(CommandKind::Simulate, &cfg).unwrap();
    assert_eq!(o.status, Status::Truncated);
    assert_eq!(o.status.exit_code(), 3);
}

#[test]
fn verify_slice_bijectivity_su2_three_sites() {
    let dir = scratch("slice_bijectivity");
    let mut cfg = with_out(RunConfig::new("A", 1, vec![3.0, 3.0, 3.0]), &dir);
    cfg.suite = Some("slice_bijectivity".into());
    let o = run(CommandKind::Verify, &cfg).unwrap();
    assert_eq!(o.status, Status::Pass);
    let reports = o.metadata["results"]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert!(!reports[0]["checks"].as_array().unwrap().is_empty());
}

#[test]
fn verify_all_passes_on_twisted_su4() {
    let dir = scratch("all");
    let mut cfg = with_out(RunConfig::new("A", 3, vec![2.0, 2.0]), &dir);
    cfg.gamma_order = 2;
    cfg.samples = 4;
    let o = run(CommandKind::Verify, &cfg).unwrap();
    assert_eq!(o.status, Status::Pass, "{}", o.metadata["results"]);
}

#[test]
fn unknown_suite_is_a_validation_error() {
    let dir = scratch("suite");
    let mut cfg = with_out(RunConfig::new("A", 1, vec![1.0]), &dir);
    cfg.suite = Some("nope".into());
    assert_eq!(run(CommandKind::Verify, &cfg).unwrap_err().exit_code(), 1);
}

#[test]
fn ym_without_charges_writes_unitary_wilson_line() {
    let dir = scratch("ym");
    let mut cfg = with_out(RunConfig::new("A", 2, vec![2.0, 2.0]), &dir);
    cfg.xi_scale = 0.0;
    let o = run(CommandKind::Ym, &cfg).unwrap();
    assert_eq!(o.status, Status::Pass, "{}", o.metadata["results"]);
    let rows = read_csv(dir.join("wilson.csv"));
    assert_eq!(rows[0].len(), 1 + 2 * 9);
    // y(0) = 1
    for (i, v) in rows[0][1..].iter().enumerate() {
        let want = if i % 2 == 0 && (i / 2) % 4 == 0 { 1.0 } else { 0.0 };
        assert!((v - want).abs() < 1e-12);
    }
    let field: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("field.json")).unwrap()).unwrap();
    assert!(field["schema_version"].is_number());
}

#[test]
fn spectrum_of_single_su2_site() {
    let dir = scratch("levels");
    let mut cfg = with_out(RunConfig::new("A", 1, vec![1.0]), &dir);
    cfg.spectrum = Some(SpectrumSpec { cutoff: 10.0, nu: None });
    let o = run(CommandKind::Spectrum, &cfg).unwrap();
    assert_eq!(o.status, Status::Pass);
    let rows = read_csv(dir.join("spectrum.csv"));
    let want: Vec<f64> = (0..).map(|m: i32| (m * (m + 2)) as f64 / 4.0).take_while(|e| *e <= 10.0).collect();
    assert_eq!(rows.len(), want.len());
    for (m, (row, e)) in rows.iter().zip(&want).enumerate() {
        assert!((row[0] - e).abs() < 1e-12);
        assert_eq!(row[1], 1.0);
        assert_eq!(row[2], m as f64);
    }
}

#[test]
fn spectrum_requires_a_cutoff() {
    let dir = scratch("nocut");
    let cfg = with_out(RunConfig::new("A", 1, vec![1.0]), &dir);
    assert_eq!(run(CommandKind::Spectrum, &cfg).unwrap_err().exit_code(), 1);
}

#[test]
fn same_config_and_seed_give_identical_files() {
    let dir = scratch("det");
    let cfg = write_config(
        &dir,
        r#"{"schema_version":1,"algebra":{"family":"A","rank":2},"lambdas":[2.0,2.0],"samples":3,
            "spectrum":{"cutoff":4.0}}"#,
    );
    for cmd in ["algebra", "hamiltonian", "simulate", "verify", "ym", "spectrum"] {
        let mut outputs = Vec::new();
        for run_id in 0..2 {
            let out = dir.join(format!("{cmd}-{run_id}"));
            let st = bin().arg(cmd).arg("--config").arg(&cfg).args(["--seed", "11", "--out"]).arg(&out).status().unwrap();
            assert_eq!(st.code(), Some(0), "{cmd}");
            let mut files: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
            files.sort();
            outputs.push(files.iter().map(|f| (f.file_name().unwrap().to_owned(), std::fs::read(f).unwrap())).collect::<Vec<_>>());
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
    }
}

#[test]
fn seed_override_changes_samples() {
    let dir = scratch("seed");
    let base = with_out(RunConfig::new("A", 1, vec![2.0, 2.0]), &dir);
    let a = run(CommandKind::Hamiltonian, &RunConfig { seed: 1, ..base.clone() }).unwrap();
    let b = run(CommandKind::Hamiltonian, &RunConfig { seed: 2, ..base }).unwrap();
    assert_ne!(a.metadata["results"], b.metadata["results"]);
}
