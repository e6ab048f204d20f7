mod common;

use common::{lspk_entries, rng, sample_params};
use lspk_core::catalog::{catalog, catalog_build, catalog_verify, EntryKind, Params};
use lspk_core::construction::{build_corollary2, kdim2_family};
use lspk_core::decomposition::decompose;
use lspk_core::search::{builtin_system, newton_search, verify_roots_build, SYSTEMS};
use lspk_core::Tolerance;

fn tol() -> Tolerance {
    Tolerance::default()
}

fn boxes(name: &str) -> Vec<(f64, f64)> {
    vec![(-1.0, 1.0); builtin_system(name).unwrap().arity]
}

#[test]
fn every_entry_verifies_at_random_params() {
    let mut r = rng(9);
    for e in catalog() {
        for _ in 0..5 {
            let p = sample_params(e, &mut r);
            // the R^2 example needs mu > 0; skip samples outside its domain
            if e.name == "khess_r2_example" && catalog_build(e.name, &p).is_err() {
                continue;
            }
            if e.name == "milnor" && e.build(&p).is_err() {
                continue;
            }
            catalog_verify(e.name, &p, tol())
                .unwrap_or_else(|err| panic!("{}: {p:?}: {err}", e.name));
        }
    }
}

#[test]
fn lspk_entries_have_declared_signature() {
    let mut r = rng(10);
    for e in lspk_entries() {
        let p = sample_params(e, &mut r);
        let d = decompose(&e.build(&p).unwrap().algebra, tol()).unwrap();
        let (d1, d2, rho) = e.expected(&p).unwrap().signature.unwrap();
        assert_eq!((d.dim_h1, d.dim_h2), (d1, d2), "{}", e.name);
        assert!((d.rho - rho).abs() < 1e-12, "{}", e.name);
    }
    assert!(catalog().iter().any(|e| e.kind == EntryKind::Nilpotent));
}

#[test]
fn dim3_case2_at_zero_comes_from_corollary2() {
    // Milnor plane with k = -1 is the first kdim2 normal form at theta = 0
    let h = kdim2_family(-1.0, 0.0, 1, tol()).unwrap();
    let built = build_corollary2(&h, &lspk_core::LinearMap::zeros(2, 2), tol()).unwrap();
    let mut p = Params::new();
    p.insert("theta".into(), 0.0);
    let table = catalog_build("lspk_dim3_case2", &p).unwrap().algebra;
    assert!(built.max_diff(&table).unwrap() < 1e-14);
}

#[test]
fn root_counts_and_builds() {
    for (name, grid, count) in [("dim3_case3", 8, 2), ("dim4", 16, 2), ("dim5", 32, 4)] {
        let sys = builtin_system(name).unwrap();
        let roots = newton_search(&sys, &boxes(name), grid).unwrap();
        assert_eq!(roots.len(), count, "{name}");
        for (x, res) in roots.roots.iter().zip(&roots.residuals) {
            assert!(*res <= 1e-10);
            verify_roots_build(name, x, 0.5, 1.0, tol()).unwrap();
        }
    }
}

#[test]
fn doubling_grid_is_stable() {
    for name in SYSTEMS {
        let sys = builtin_system(name).unwrap();
        let grid = if sys.arity == 1 { 8 } else { 16 };
        let a = newton_search(&sys, &boxes(name), grid).unwrap();
        let b = newton_search(&sys, &boxes(name), 2 * grid).unwrap();
        assert_eq!(a.len(), b.len(), "{name}");
        for (x, y) in a.roots.iter().zip(&b.roots) {
            assert!(x.iter().zip(y).all(|(p, q)| (p - q).abs() <= 1e-6));
        }
    }
}
