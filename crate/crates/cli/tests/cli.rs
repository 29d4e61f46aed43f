use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use equidist_core::diagnostics::chebyshev_oracle_roots;
use equidist_core::roots::matched_distance;
use equidist_core::{Complex64, DensePoly, FamilySpec, SolverConfig};
use serde_json::Value;

fn equidist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equidist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, body).unwrap();
    path
}

fn read_rows(path: &Path) -> Vec<(Complex64, f64)> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im,green_value"));
    lines
        .map(|line| {
            let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
            assert_eq!(f.len(), 3, "{line}");
            (Complex64::new(f[0], f[1]), f[2])
        })
        .collect()
}

fn critical_orbit_config(k: usize, shift: &str) -> String {
    format!(
        r#"{{
  "family": {{"kind": "critical_orbit"}},
  "k_list": [{k}],
  "m": 1,
  "shift": {shift},
  "diagnostics": {{"reference": {{"critical_orbit_k": 6}}}},
  "render": {{"grid": 32}},
  "output": {{"csv_path": "out/roots.csv", "svg_path": "out/roots.svg", "report_path": "out/report.json"}}
}}"#
    )
}

#[test]
fn critical_orbit_k5_gives_fifteen_rows() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &critical_orbit_config(5, "0"));
    let out = equidist(&["run", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = read_rows(&dir.path().join("out/roots.csv"));
    assert_eq!(rows.len(), 15);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    let run = &report["runs"][0];
    assert_eq!(run["degree"], 16);
    assert_eq!(run["partial"], false);
    assert_eq!(run["solver"]["converged_count"], 15);
    assert_eq!(report["reference"]["proxy"], true);
    assert_eq!(run["centering"].as_array().unwrap().len(), 3);
    assert!(run["moments"]["max_gap"].as_f64().unwrap().is_finite());
    assert!(std::fs::read_to_string(dir.path().join("out/roots.svg")).unwrap().contains("<circle"));
}

#[test]
fn rows_pass_the_residual_check_through_the_family_jet() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &critical_orbit_config(7, r#""a_k = k""#));
    let out = equidist(&["run", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = read_rows(&dir.path().join("out/roots.csv"));
    assert_eq!(rows.len(), 63);
    let tol = SolverConfig::default().tol;
    for (z, g) in rows {
        let jet = FamilySpec::CriticalOrbit.jet(z, 7, 2);
        let ratio = ((jet.get(1) - Complex64::new(7.0, 0.0)) / jet.get(2)).to_complex().norm();
        assert!(ratio <= tol * (1.0 + z.norm()), "{z}: {ratio:e}");
        assert!(g >= 0.0);
    }
}

#[test]
fn chebyshev_run_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{
  "family": {"kind": "iterate_fixed", "coeffs": [-2, 0, 1]},
  "k_list": [4],
  "m": 0,
  "shift": 0.5,
  "diagnostics": {"reference": {"n_samples": 500}},
  "output": {"csv_path": "roots.csv", "report_path": "report.json"}
}"#,
    );
    let out = equidist(&["run", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let roots: Vec<Complex64> = read_rows(&dir.path().join("roots.csv")).into_iter().map(|r| r.0).collect();
    assert_eq!(roots.len(), 16);
    let oracle = chebyshev_oracle_roots(4, 0, Complex64::new(0.5, 0.0)).unwrap();
    assert!(matched_distance(&roots, &oracle) <= 1e-8);
    assert!(!dir.path().join("roots.svg").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &critical_orbit_config(6, "0"));
    let artifacts = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_equidist"))
            .env("EQUIDIST_THREADS", threads)
            .args(["run", config.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success());
        let read = |name: &str| std::fs::read(dir.path().join("out").join(name)).unwrap();
        (read("roots.csv"), read("roots.svg"), read("report.json"))
    };
    let first = artifacts("1");
    assert_eq!(first, artifacts("1"));
    assert_eq!(first, artifacts("4"));
}

#[test]
fn several_k_get_separate_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{
  "family": {"kind": "critical_orbit"},
  "k_list": [3, 4],
  "m": 1,
  "diagnostics": {"reference": {"critical_orbit_k": 5}},
  "output": {"csv_path": "roots_{k}.csv", "report_path": "report.json"}
}"#,
    );
    let out = equidist(&["run", config.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(read_rows(&dir.path().join("roots_3.csv")).len(), 3);
    assert_eq!(read_rows(&dir.path().join("roots_4.csv")).len(), 7);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["runs"].as_array().unwrap().len(), 2);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "{\n  \"family\": {\"kind\": \"critical_orbit\"},\n  \"k_list\": [5],\n  \"bogus\": 1\n}");
    let out = equidist(&["run", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line") && stderr.contains("bogus"), "{stderr}");

    // k = 14 has degree 8192, past the desk-scale cap
    let config = write_config(dir.path(), &critical_orbit_config(14, "0"));
    let out = equidist(&["run", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("allow-large"));
}

#[test]
fn io_errors_exit_four() {
    let out = equidist(&["run", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(4));

    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &critical_orbit_config(3, "0"));
    let out = equidist(&["render", "/nonexistent/roots.csv", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn large_degrees_are_subsampled_and_labelled_partial() {
    let dir = tempfile::tempdir().unwrap();
    let body = critical_orbit_config(14, "0").replace(r#""render": {"grid": 32}"#, r#""render": {"grid": 16, "newton_grid": 24}"#);
    let config = write_config(dir.path(), &body);
    let out = equidist(&["run", config.to_str().unwrap(), "--allow-large"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
    let run = &report["runs"][0];
    assert_eq!(run["partial"], true);
    assert_eq!(run["solver"]["mode"], "subsampled");
    let rows = read_rows(&dir.path().join("out/roots.csv"));
    assert!(!rows.is_empty() && rows.len() as u64 <= 8191);
    for (z, _) in &rows {
        let jet = FamilySpec::CriticalOrbit.jet(*z, 14, 2);
        let ratio = (jet.get(1) / jet.get(2)).to_complex().norm();
        assert!(ratio <= 1e-9 * (1.0 + z.norm()), "{z}: {ratio:e}");
    }
}

#[test]
fn oracle_subcommands_print_csv() {
    let out = equidist(&["oracle", "chebyshev", "--k", "3", "--m", "0", "--a", "-0.5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 8);

    let out = equidist(&["oracle", "companion", "-1", "0", "0", "1"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        let z = Complex64::new(f[0], f[1]);
        assert!((z.powu(3) - 1.0).norm() < 1e-12);
    }

    let out = equidist(&["oracle", "brolin", "0,0,1", "--n", "50", "--depth", "30", "--seed", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 51);

    let out = equidist(&["oracle", "brolin", "0,0,2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_subcommand_redraws_a_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &critical_orbit_config(4, "0"));
    assert!(equidist(&["run", config.to_str().unwrap()]).status.success());
    let csv = dir.path().join("out/roots.csv");
    let out_svg = dir.path().join("again.svg");
    let out = equidist(&["render", csv.to_str().unwrap(), config.to_str().unwrap(), "--out", out_svg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(std::fs::read(&out_svg).unwrap(), std::fs::read(dir.path().join("out/roots.svg")).unwrap());
}

#[test]
fn golden_svg() {
    use equidist::{render_svg, Bounds, GreenGrid, RenderStyle};
    use equidist_core::GreenEvaluator;

    let bounds = Bounds::from_array([-2.5, 2.5, -2.5, 2.5]);
    let ge = GreenEvaluator::filled_julia(DensePoly::from_real(&[-1.0, 0.0, 1.0])).unwrap();
    let grid = GreenGrid::sample(&ge, bounds, 8).unwrap();
    let points = [Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.618, 0.0)];
    let style = RenderStyle { width_px: 80.0, clamp: 0.5, dot_radius: 2.0 };
    let svg = render_svg(&points, &grid, bounds, &style).unwrap();

    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/basilica_8x8.svg");
    if std::env::var_os("EQUIDIST_BLESS").is_some() {
        std::fs::write(&golden, &svg).unwrap();
    }
    assert_eq!(svg, std::fs::read_to_string(&golden).unwrap());
}
