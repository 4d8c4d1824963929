use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use zerolab::table::Table;

fn zerolab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zerolab"))
        .args(args)
        .current_dir(dir)
        .env_remove("ZEROLAB_OUTPUT_ROOT")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn manifest(dir: &Path) -> BTreeMap<String, String> {
    std::fs::read_to_string(dir.join("manifest.txt"))
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.split_once(" = ").unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn checksums(dir: &Path) -> BTreeMap<String, String> {
    manifest(dir).into_iter().filter(|(k, _)| k.starts_with("output.")).collect()
}

fn run_ok(args: &[&str], dir: &Path) {
    let out = zerolab(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn table(path: PathBuf) -> Table {
    Table::read(&path).unwrap()
}

#[test]
fn intensity_sweep_anchors_and_tails() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "schema_version = 1\n[intensity]\norders = [1, 2]\nr_min = 0.05\nr_max = 8.0\npoints = 40\nmc_samples = 5000\n",
    );
    run_ok(&["intensity", "--config", cfg.to_str().unwrap(), "--out", "o"], tmp.path());
    let out = tmp.path().join("o");
    let k1 = table(out.join("intensity_k1.tsv"));
    assert!(k1.column("rho").unwrap().iter().all(|v| (v - 1.0 / PI).abs() < 1e-10));
    let k2 = table(out.join("intensity_k2.tsv"));
    let (r, rho) = (k2.column("r").unwrap(), k2.column("rho").unwrap());
    // quadratic rise at small r, 1/π² at the far end
    assert!((rho[1] / rho[0] - (r[1] / r[0]).powi(2)).abs() < 0.05 * (r[1] / r[0]).powi(2));
    assert!((rho.last().unwrap() * PI * PI - 1.0).abs() < 1e-8);
    let hash = &manifest(&out)["config_hash"];
    assert!(std::fs::read_to_string(out.join("oracle_k2.tsv")).unwrap().contains(hash.as_str()));
}

#[test]
fn malformed_config_is_a_usage_error_without_files() {
    let tmp = tempfile::tempdir().unwrap();
    for text in [
        "schema_version = 1\n[intensity\n",
        "schema_version = 1\n[intensity]\nbogus = 3\n",
        "schema_version = 9\n",
        "[intensity]\npoints = 5\n",
        "schema_version = 1\n[intensity]\norders = [7]\n",
    ] {
        let cfg = write_config(tmp.path(), text);
        let out = zerolab(&["intensity", "--config", cfg.to_str().unwrap(), "--out", "o"], tmp.path());
        assert_eq!(out.status.code(), Some(2), "{text:?}");
        assert!(!tmp.path().join("o").exists());
    }
    let out = zerolab(&["cluster-scan", "--replicas", "10", "--out", "o"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let out = zerolab(&["no-such-command"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_and_io_failures_have_distinct_codes() {
    let tmp = tempfile::tempdir().unwrap();
    // a kernel cut at r = 2 has not decayed, so its tail cannot be certified
    let cfg = write_config(
        tmp.path(),
        "schema_version = 1\n[variance]\nkernel_r_max = 2.0\nkernel_step = 0.05\nscales = [5.0]\nmollifier_scales = [4.0]\n",
    );
    let out = zerolab(&["variance", "--config", cfg.to_str().unwrap(), "--out", "v"], tmp.path());
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!tmp.path().join("v").exists());

    std::fs::write(tmp.path().join("blocker"), "").unwrap();
    let out = zerolab(&["covering-demo", "--replicas", "5", "--out", "blocker/sub"], tmp.path());
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn runs_reproduce_and_seed_changes_the_hash() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "schema_version = 1\n[clt]\nscales = [2.0]\nreplicas = 150\n");
    let c = cfg.to_str().unwrap();
    run_ok(&["clt", "--config", c, "--seed", "5", "--out", "a"], tmp.path());
    run_ok(&["clt", "--config", c, "--seed", "5", "--out", "b", "--workers", "1"], tmp.path());
    run_ok(&["clt", "--config", c, "--seed", "6", "--out", "c"], tmp.path());
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    assert_eq!(checksums(&a), checksums(&b));
    assert_eq!(manifest(&a)["config_hash"], manifest(&b)["config_hash"]);
    assert_ne!(manifest(&a)["config_hash"], manifest(&c)["config_hash"]);
    // the stored config replays the run
    run_ok(&["clt", "--config", a.join("config.toml").to_str().unwrap(), "--out", "d"], tmp.path());
    assert_eq!(checksums(&a), checksums(&tmp.path().join("d")));
}

#[test]
fn output_root_override() {
    let tmp = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_zerolab"))
        .args(["covering-demo", "--replicas", "20"])
        .current_dir(tmp.path())
        .env("ZEROLAB_OUTPUT_ROOT", tmp.path().join("root"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let dirs: Vec<_> = std::fs::read_dir(tmp.path().join("root")).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(dirs.len(), 1);
    assert!(dirs[0].to_string_lossy().starts_with("covering-demo-"));
}

#[test]
fn cluster_scan_slope() {
    let tmp = tempfile::tempdir().unwrap();
    run_ok(&["cluster-scan", "--out", "o"], tmp.path());
    for k in [2, 3, 4] {
        let t = table(tmp.path().join(format!("o/cluster_k{k}.tsv")));
        let slope: f64 = t.meta("log_gap_slope_vs_d2").unwrap().parse().unwrap();
        assert!(slope <= -0.4, "k={k}: {slope}");
    }
    let t = table(tmp.path().join("o/cluster_k3.tsv"));
    assert!(t.column("gap_over_envelope").unwrap().iter().all(|v| *v < 10.0));
}

#[test]
fn variance_rows() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "schema_version = 1\n[variance]\nkernel_step = 0.02\nscales = [5.0, 10.0, 20.0]\n");
    run_ok(&["variance", "--config", cfg.to_str().unwrap(), "--out", "o"], tmp.path());
    let s = table(tmp.path().join("o/variance_summary.tsv"));
    assert!((s.column("superhomogeneity").unwrap()[0] + 1.0).abs() < 0.02);
    assert_eq!(s.column("lower_bound_holds").unwrap()[0], 1.0);
    let v = table(tmp.path().join("o/variance_scales.tsv"));
    for (lb, ex) in v.column("lower_bound").unwrap().iter().zip(v.column("exact").unwrap()) {
        assert!(*lb <= ex);
    }
    let m = table(tmp.path().join("o/mollifier.tsv"));
    for ratio in &m.column("ratio_to_previous").unwrap()[1..] {
        assert!((ratio - 2.0).abs() < 0.4);
    }
}

#[test]
fn density_check_and_covering() {
    let tmp = tempfile::tempdir().unwrap();
    run_ok(&["density-check", "--replicas", "20000", "--out", "d"], tmp.path());
    let t = table(tmp.path().join("d/density_bins.tsv"));
    assert_eq!(t.meta("pass"), Some("true"));
    run_ok(&["covering-demo", "--replicas", "300", "--out", "c"], tmp.path());
    let t = table(tmp.path().join("c/covering.tsv"));
    assert_eq!(t.rows.len(), 300);
    for row in &t.rows {
        assert!(row[3] <= row[4] && row[2] <= row[1]);
    }
}
