use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lspk_cli::file::parse_algebra_file;
use lspk_core::catalog::{catalog, catalog_build, Params};
use lspk_core::forms::{check_left_symmetric, koszul_form};
use lspk_core::Tolerance;
use tempfile::TempDir;

fn lspk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lspk"))
        .args(args)
        .env_remove("LSPK_EPS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn export(dir: &TempDir, name: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    let o = lspk(&["catalog", "export", name, "-o", path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    path
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn verify_all_passes() {
    let o = lspk(&["catalog", "verify-all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), catalog().len());
    assert!(out.lines().all(|l| l.contains(" ok ")));
}

#[test]
fn list_names_entries() {
    let out = stdout(&lspk(&["catalog", "list"]));
    assert!(out.contains("lspk_dim5") && out.contains("rn_canonical"));
}

#[test]
fn export_parse_round_trip_is_bit_identical() {
    let dir = TempDir::new().unwrap();
    for e in catalog() {
        let path = export(&dir, e.name);
        let loaded = parse_algebra_file(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let direct = catalog_build(e.name, &Params::new()).unwrap();
        assert_eq!(
            loaded.algebra.constants(),
            direct.algebra.constants(),
            "{}",
            e.name
        );
        assert_eq!(
            loaded.metric.map(|g| g.matrix().clone()),
            direct.metric.map(|g| g.matrix().clone())
        );
    }
}

#[test]
fn exported_lspks_check_clean() {
    let dir = TempDir::new().unwrap();
    for name in ["lspk_dim2", "lspk_dim4", "lspk_dim5", "rn_canonical"] {
        let path = export(&dir, name);
        assert_eq!(lspk(&["check", p(&path)]).status.code(), Some(0), "{name}");
    }
    let a0 = export(&dir, "nilpotent_A0");
    assert_eq!(lspk(&["check", p(&a0), "--lsa"]).status.code(), Some(0));
    assert_eq!(lspk(&["check", p(&a0)]).status.code(), Some(1));
}

#[test]
fn decompose_dim5_json() {
    let dir = TempDir::new().unwrap();
    let path = export(&dir, "lspk_dim5");
    let o = lspk(&["decompose", p(&path), "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rho"].as_f64(), Some(3.5));
    assert_eq!(v["dim_h1"].as_u64(), Some(3));
    assert_eq!(v["dim_h2"].as_u64(), Some(1));
}

#[test]
fn geometry_einstein_constant() {
    let dir = TempDir::new().unwrap();
    let path = export(&dir, "lspk_dim2");
    let o = lspk(&["geometry", p(&path), "--scale", "2", "--einstein"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("mu = -0.5"), "{}", stdout(&o));
    let o = lspk(&["geometry", p(&path), "--tb-ricci", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["tangent_bundle"]["oracle_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn check_json_matches_library() {
    let dir = TempDir::new().unwrap();
    let path = export(&dir, "lspk_dim3_case3");
    let o = lspk(&["check", p(&path), "--lsa", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let a = catalog_build("lspk_dim3_case3", &Params::new())
        .unwrap()
        .algebra;
    let lib = check_left_symmetric(&a, Tolerance::default());
    let pred = &v["predicates"][0];
    assert_eq!(pred["name"], "left-symmetric");
    assert_eq!(pred["max_residual"].as_f64(), Some(lib.max_residual));
    assert_eq!(pred["threshold"].as_f64(), Some(lib.threshold));
    assert_eq!(v["all_hold"], true);
}

#[test]
fn koszul_json() {
    let dir = TempDir::new().unwrap();
    let path = export(&dir, "lspk_dim4");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&lspk(&["koszul", p(&path), "--json"]))).unwrap();
    let a = catalog_build("lspk_dim4", &Params::new()).unwrap().algebra;
    let b = koszul_form(&a);
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(v["koszul"][i][j].as_f64(), Some(b.matrix()[(i, j)]));
        }
    }
    assert_eq!(v["positive_definite"], true);
}

#[test]
fn khessian_on_built_milnor() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("milnor.json");
    let o = lspk(&["build", "milnor", "--h", "0,2,0", "-o", p(&path)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        lspk(&["check", p(&path), "--khessian", "-4"]).status.code(),
        Some(0)
    );
    assert_eq!(
        lspk(&["check", p(&path), "--khessian", "-1"]).status.code(),
        Some(1)
    );
}

#[test]
fn build_commands_produce_lspks() {
    let dir = TempDir::new().unwrap();
    let c1 = dir.path().join("c1.json");
    let o = lspk(&[
        "build",
        "corollary1",
        "--n",
        "2",
        "--d",
        "[[0,1],[-1,0]]",
        "-o",
        p(&c1),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lspk(&["check", p(&c1)]).status.code(), Some(0));

    let data = write(
        &dir,
        "case3.json",
        r#"{"dim1": 1, "dim2": 1, "circ2": [{"i": 0, "j": 0, "coeffs": [0.4082482904638631]}],
            "rho2": [[[-0.4082482904638631]]]}"#,
    );
    let out = dir.path().join("theo.json");
    assert_eq!(
        lspk(&["build", "theo", p(&data), "-o", p(&out)])
            .status
            .code(),
        Some(0)
    );
    let o = lspk(&["decompose", p(&out), "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["rho"].as_f64().unwrap() - 2.5).abs() < 1e-12);

    let bad = write(
        &dir,
        "bad.json",
        r#"{"dim1": 1, "dim2": 1, "circ2": [{"i": 0, "j": 0, "coeffs": [0.5]}], "rho2": [[[-0.5]]]}"#,
    );
    assert_eq!(lspk(&["build", "theo", p(&bad)]).status.code(), Some(1));

    let plane = write(
        &dir,
        "plane.json",
        &stdout(&lspk(&["catalog", "export", "khess_kdim2_f1"])),
    );
    let c2 = dir.path().join("c2.json");
    assert_eq!(
        lspk(&["build", "corollary2", p(&plane), "-o", p(&c2)])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(lspk(&["check", p(&c2)]).status.code(), Some(0));
}

#[test]
fn search_prints_roots() {
    let o = lspk(&["search", "dim4"]);
    assert_eq!(o.status.code(), Some(0));
    let roots: Vec<Vec<f64>> = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(roots.len(), 2);
    let o = lspk(&[
        "search", "dim5", "--box", "-1,1", "--grid", "32", "--verify",
    ]);
    let roots: Vec<Vec<f64>> = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(roots.len(), 4);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(lspk(&["search", "dim9"]).status.code(), Some(2));
}

#[test]
fn usage_and_parse_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(lspk(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        lspk(&["check", "/nonexistent/file.json"]).status.code(),
        Some(2)
    );
    let bad = write(
        &dir,
        "bad.json",
        r#"{"name": "x", "dim": 2, "products": [{"i": 0, "j": 0, "coeffs": [1]}]}"#,
    );
    assert_eq!(lspk(&["check", p(&bad)]).status.code(), Some(2));
    let broken = write(&dir, "broken.json", "{\"dim\": 2,");
    assert_eq!(lspk(&["koszul", p(&broken)]).status.code(), Some(2));
    assert_eq!(
        lspk(&["catalog", "show", "lspk_dim3_case3", "--param", "sign=3"])
            .status
            .code(),
        Some(2)
    );
    let path = export(&dir, "lspk_dim2");
    let o = Command::new(env!("CARGO_BIN_EXE_lspk"))
        .args(["check", p(&path)])
        .env("LSPK_EPS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn indefinite_metric_rejected_by_geometry() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "m.json",
        r#"{"name": "x", "dim": 2, "products": [{"i": 0, "j": 0, "coeffs": [0, 1]}], "metric": [[1, 0], [0, -1]]}"#,
    );
    assert_eq!(lspk(&["koszul", p(&f)]).status.code(), Some(0));
    assert_eq!(lspk(&["geometry", p(&f)]).status.code(), Some(1));
}

#[test]
fn tolerance_from_environment() {
    let dir = TempDir::new().unwrap();
    // slightly off the table: fails at the default tolerance, passes at 1e-3
    let f = write(
        &dir,
        "near.json",
        r#"{"name": "near", "dim": 2, "products": [
            {"i": 0, "j": 0, "coeffs": [0, 1]}, {"i": 1, "j": 0, "coeffs": [0.5001, 0]},
            {"i": 1, "j": 1, "coeffs": [0, 1]}]}"#,
    );
    assert_eq!(lspk(&["check", p(&f), "--lsa"]).status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_lspk"))
        .args(["check", p(&f), "--lsa"])
        .env("LSPK_EPS", "1e-3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn decompose_data_rebuilds_same_koszul() {
    let dir = TempDir::new().unwrap();
    let src = export(&dir, "lspk_dim5");
    let o = lspk(&["decompose", p(&src), "--data"]);
    assert_eq!(o.status.code(), Some(0));
    let data = write(&dir, "data.json", &stdout(&o));
    let out = dir.path().join("rebuilt.json");
    let o = lspk(&["build", "theo", p(&data), "-o", p(&out)]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let rebuilt = parse_algebra_file(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let tol = Tolerance::default();
    assert!(check_left_symmetric(&rebuilt.algebra, tol).holds);
    let b = koszul_form(&rebuilt.algebra);
    for i in 0..5 {
        for j in 0..5 {
            let want = if i == j { 3.5 } else { 0.0 };
            assert!((b.matrix()[(i, j)] - want).abs() < 1e-9);
        }
    }
}
