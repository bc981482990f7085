//! The experiment pipeline end to end: files on disk, their contents, and
//! the command-line driver's exit codes.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;

use spectral_inverse::experiment::{run_experiment, sha256_hex, ExperimentConfig, Role};

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn quick(dir: &Path) -> ExperimentConfig {
    ExperimentConfig {
        space_n: 201,
        time_m: 1000,
        output_dir: dir.to_path_buf(),
        ..ExperimentConfig::default()
    }
}

fn rod(x: f64) -> f64 {
    (x * (PI - x)).powi(3)
}

/// Coefficients of `x³(π - x)³` in the monomial basis.
fn rod_polynomial() -> Vec<f64> {
    let a = [0.0, 0.0, 0.0, 1.0];
    let b = [PI.powi(3), -3.0 * PI * PI, 3.0 * PI, -1.0];
    let mut c = vec![0.0; 7];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    c
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, v)| i as f64 * v).collect()
}

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * x + v)
}

/// `f(x) = l(φ) + Σ_{k≤l} ∫ l²(ψ - φ) v_k / (λ_k (1 - e^{-λ_k T})) v_k(x)` for
/// `l(u) = -u''`, `ψ = 0`, written out directly with its own quadrature.
fn f_num_plain(l: usize, horizon: f64) -> impl Fn(f64) -> f64 {
    let c = rod_polynomial();
    let d2 = derivative(&derivative(&c));
    let d4 = derivative(&derivative(&d2));
    let n = 40_000;
    let h = PI / n as f64;
    let v = |k: usize, x: f64| (2.0 / PI).sqrt() * (k as f64 * x).sin();
    let weights: Vec<f64> = (1..=l)
        .map(|k| {
            let integrand = |s: f64| -horner(&d4, s) * v(k, s);
            let mut acc = integrand(0.0) + integrand(PI);
            for i in 1..n {
                acc += integrand(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let lambda = (k * k) as f64;
            acc * h / 3.0 / (lambda * (1.0 - (-lambda * horizon).exp()))
        })
        .collect();
    move |x| -horner(&d2, x) + weights.iter().enumerate().map(|(i, w)| w * v(i + 1, x)).sum::<f64>()
}

#[test]
fn source_csv_matches_an_independent_transcription() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig {
        epsilons: vec![0.0],
        ..quick(dir.path())
    };
    run_experiment(&cfg).unwrap();
    let reference = f_num_plain(20, 5.0);
    let (header, rows) = read_csv(&dir.path().join("f_eps0_l20.csv"));
    assert_eq!(header, ["x", "f"]);
    let worst = rows.iter().map(|r| (r[1] - reference(r[0])).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-8, "max abs diff {worst:e}");
}

#[test]
fn snapshot_files_start_at_phi_and_respect_the_boundary() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_experiment(&quick(dir.path())).unwrap();
    let files: Vec<_> = run.manifest.by_role(Role::USnapshots).collect();
    assert_eq!(files.len(), 3);
    assert_eq!(run.manifest.by_role(Role::Source).count(), 3);
    assert_eq!(run.manifest.by_role(Role::Verification).count(), 3);
    for entry in files {
        let (header, rows) = read_csv(&dir.path().join(&entry.file));
        assert_eq!(header, ["x", "u(t=0)", "u(t=0.5)", "u(t=2.5)", "u(t=4.5)"]);
        for r in &rows {
            assert_eq!(r[1], rod(r[0]), "u(x, 0) at x = {}", r[0]);
        }
        let (first, last) = (&rows[0], &rows[rows.len() - 1]);
        assert_eq!((first[0], last[0]), (0.0, PI));
        assert!(first[1..].iter().chain(&last[1..]).all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = ExperimentConfig {
        epsilons: vec![0.0, 0.9],
        emit_plots: true,
        ..quick(a.path())
    };
    let first = run_experiment(&cfg).unwrap();
    let second = run_experiment(&ExperimentConfig {
        output_dir: b.path().to_path_buf(),
        ..cfg
    })
    .unwrap();
    assert_eq!(first.manifest, second.manifest);
    for entry in &first.manifest.files {
        let bytes = std::fs::read(a.path().join(&entry.file)).unwrap();
        assert_eq!(bytes, std::fs::read(b.path().join(&entry.file)).unwrap());
        assert_eq!(sha256_hex(&bytes), entry.sha256);
    }
    assert_eq!(
        std::fs::read(a.path().join("manifest.json")).unwrap(),
        std::fs::read(b.path().join("manifest.json")).unwrap()
    );
}

#[test]
fn manifest_json_lists_files_roles_and_checksums() {
    let dir = tempfile::tempdir().unwrap();
    let run = run_experiment(&quick(dir.path())).unwrap();
    let text = std::fs::read_to_string(dir.path().join("manifest.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let files = json["files"].as_array().unwrap();
    assert_eq!(files.len(), run.manifest.files.len());
    for f in files {
        let name = f["file"].as_str().unwrap();
        let bytes = std::fs::read(dir.path().join(name)).unwrap();
        assert_eq!(f["sha256"].as_str().unwrap(), sha256_hex(&bytes));
        assert!(f["role"].is_string());
    }
}

#[test]
fn fractional_run_uses_the_l1_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::parse(&format!(
        "alpha = 0.5\nmodes = 30\nspace_n = 151\ntime_m = 800\ndir = {}\n",
        dir.path().display()
    ))
    .unwrap();
    let run = run_experiment(&cfg).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("verify_eps0.9_l30.json")).unwrap()).unwrap();
    assert_eq!(report["report"]["scheme"], "l1");
    assert!(run.all_passed());
}

fn invsrc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_invsrc")).args(args).output().unwrap()
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let config = dir.path().join("rod.ini");
    std::fs::write(
        &config,
        "[problem]\nepsilon = 0.9\n[series]\nmodes = 7, 10\n[oracle]\nspace_n = 101\ntime_m = 400\n",
    )
    .unwrap();

    let ok = invsrc(&["run", "--config", config.to_str().unwrap(), "--out", out, "--plots"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(dir.path().join("u_eps0.9_l10.svg").exists());

    let empty = invsrc(&["run", "--modes", "", "--out", out]);
    assert_eq!(empty.status.code(), Some(1));
    let unknown = invsrc(&["run", "--operator", "landau_hamiltonian", "--out", out]);
    assert_eq!(unknown.status.code(), Some(1));
    let single = invsrc(&["compare", "--epsilon", "0.9", "--out", out]);
    assert_eq!(single.status.code(), Some(1));

    let too_many = invsrc(&["run", "--modes", "5000", "--out", out]);
    assert_eq!(too_many.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&too_many.stderr).contains("l = 5000"));
}

#[test]
fn cli_compare_writes_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = invsrc(&[
        "compare",
        "--epsilon",
        "0,0.9",
        "--modes",
        "20",
        "--snapshots",
        "2.5",
        "--space-n",
        "101",
        "--time-m",
        "400",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = read_csv(&dir.path().join("energy_comparison.csv"));
    assert_eq!(header[..3], ["epsilon", "f_norm", "u_norm(t=2.5)"]);
    assert_eq!(rows.len(), 2);
    assert!(rows[1][1] > rows[0][1]);
}
