//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod common;

use std::time::Instant;

use common::{lspk_entries, random_invertible, random_matrix, rng, sample_params};
use lspk_core::catalog::{catalog_verify, sl2_bracket, Params};
use lspk_core::construction::{build_lspk, build_milnor, kdim2_family, recognize_milnor};
use lspk_core::decomposition::decompose;
use lspk_core::forms::{check_k_hessian, is_solvable, koszul_form, rn_isomorphism};
use lspk_core::geometry::{einstein_check, second_koszul_form, tangent_bundle_ricci};
use lspk_core::search::{builtin_system, newton_search, verify_roots_build};
use lspk_core::{
    AlgebraStructure, BilinearForm, Error, LinearMap, MetricAlgebra, MilnorSpec, Side, Tolerance,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn tol() -> Tolerance {
    Tolerance::default()
}

/// Koszul multiple and signature as stated for each family, written out here
/// rather than read back from the catalog.
fn stated(name: &str, p: &Params) -> (f64, (usize, usize, f64)) {
    match name {
        "rn_canonical" => {
            let n = p["n"] as usize;
            (1.0, (0, n - 1, n as f64))
        }
        "lspk_dim2" => (1.5, (1, 0, 1.5)),
        "lspk_dim3_case1" => (2.0, (2, 0, 2.0)),
        "lspk_dim3_case2" => (3.0, (0, 2, 3.0)),
        "lspk_dim3_case3" => (2.5, (1, 1, 2.5)),
        "lspk_dim4" => (3.0, (2, 1, 3.0)),
        "lspk_dim5" => (3.5, (3, 1, 3.5)),
        other => panic!("no stated values for {other}"),
    }
}

/// Defaults plus five random samples for each LSPK family.
fn samples(seed: u64) -> Vec<(&'static str, Params, AlgebraStructure)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for e in lspk_entries() {
        let mut ps = vec![e.defaults()];
        if !e.params.is_empty() {
            ps.extend((0..5).map(|_| sample_params(e, &mut r)));
        }
        for p in ps {
            let a = e
                .build(&p)
                .map_err(|err| format!("{}: {err}", e.name))
                .unwrap()
                .algebra;
            out.push((e.name, p, a));
        }
    }
    out
}

fn koszul_matrices() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (name, p, a) in samples(101) {
        let (rho, _) = stated(name, &p);
        let n = a.dim();
        let diff = (koszul_form(&a).matrix() - LinearMap::identity(n, n) * rho).amax();
        worst = worst.max(diff);
        if diff > 1e-9 {
            return Err(format!("{name} {p:?}: Koszul deviation {diff:e}"));
        }
        catalog_verify(name, &p, tol()).map_err(|e| format!("{name} {p:?}: {e}"))?;
        count += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 1.0 {
        return Err(format!("runtime {secs:.3} s"));
    }
    Ok(format!(
        "{count} algebras, max deviation {worst:e}, {secs:.3} s"
    ))
}

fn signatures() -> Outcome {
    let mut worst = 0.0_f64;
    for (name, p, a) in samples(102) {
        let (_, (d1, d2, rho)) = stated(name, &p);
        let d = decompose(&a, tol()).map_err(|e| format!("{name} {p:?}: {e}"))?;
        if (d.dim_h1, d.dim_h2) != (d1, d2) || (d.rho - rho).abs() > 1e-9 {
            return Err(format!(
                "{name}: got {:?}, expected {:?}",
                d.signature(),
                (d1, d2, rho)
            ));
        }
        for r in &d.residuals {
            worst = worst.max(r.value);
            if !(r.value <= 1e-8) {
                return Err(format!("{name}: residual {} = {:e}", r.name, r.value));
            }
        }
    }
    Ok(format!("max residual {worst:e}"))
}

fn round_trip() -> Outcome {
    let mut worst = 0.0_f64;
    for (name, p, a) in samples(103) {
        let d = decompose(&a, tol()).map_err(|e| format!("{name}: {e}"))?;
        let rebuilt = build_lspk(&d.to_lspk_data(), tol()).map_err(|e| format!("{name}: {e}"))?;
        let target = a
            .change_basis(&d.basis_matrix())
            .map_err(|e| e.to_string())?;
        let diff = rebuilt.max_diff(&target).map_err(|e| e.to_string())?;
        worst = worst.max(diff);
        if !(diff <= 1e-8) {
            return Err(format!("{name} {p:?}: {diff:e}"));
        }
    }
    Ok(format!("max deviation {worst:e}"))
}

fn ricci_oracle() -> Outcome {
    let mut worst = 0.0_f64;
    for (name, _, a) in samples(104) {
        let b = koszul_form(&a);
        for s in [1.0, 3.0] {
            let m = MetricAlgebra::new(a.clone(), b.scaled(s), tol()).map_err(|e| e.to_string())?;
            let rep = tangent_bundle_ricci(&m, tol()).map_err(|e| format!("{name}: {e}"))?;
            let beta = second_koszul_form(&m, tol()).map_err(|e| e.to_string())?;
            let dev = (rep.tb_ricci_hh.matrix() + beta.matrix())
                .amax()
                .max((rep.tb_ricci_vv.matrix() + beta.matrix()).amax())
                .max(rep.tb_ricci_hv.amax());
            worst = worst.max(dev);
            if !(dev <= 1e-7) {
                return Err(format!("{name} g={s}B: {dev:e}"));
            }
        }
    }
    let a0 = AlgebraStructure::from_products(2, &[(0, 0, vec![0.0, 1.0])]).unwrap();
    let m = MetricAlgebra::new(a0, BilinearForm::identity(2), tol()).unwrap();
    let rep = tangent_bundle_ricci(&m, tol()).map_err(|e| format!("A0: {e}"))?;
    let flat = rep
        .tb_ricci_hh
        .matrix()
        .amax()
        .max(rep.tb_ricci_vv.matrix().amax())
        .max(rep.tb_ricci_hv.amax());
    if !(flat <= 1e-10) {
        return Err(format!("A0 not Ricci flat: {flat:e}"));
    }
    Ok(format!("max deviation {worst:e}, A0 {flat:e}"))
}

fn einstein() -> Outcome {
    let mut worst = 0.0_f64;
    for (name, _, a) in samples(105) {
        for alpha in [0.5, 1.0, 2.0, 5.0] {
            let mu = einstein_check(&a, alpha, tol())
                .map_err(|e| format!("{name} alpha={alpha}: {e}"))?;
            let dev = (mu + 1.0 / alpha).abs();
            worst = worst.max(dev);
            if !(dev <= 1e-8) {
                return Err(format!("{name} alpha={alpha}: mu = {mu}"));
            }
        }
    }
    Ok(format!("max |mu + 1/alpha| {worst:e}"))
}

fn classification_roots() -> Outcome {
    let cases: [(&str, usize, Vec<Vec<f64>>); 3] = [
        ("dim4", 16, vec![vec![-0.35355339], vec![0.35355339]]),
        ("dim3_case3", 8, vec![vec![-0.40824829], vec![0.40824829]]),
        (
            "dim5",
            32,
            vec![
                vec![-0.43301270, 0.57735027],
                vec![-0.31622777, -0.31622777],
                vec![0.31622777, 0.31622777],
                vec![0.43301270, -0.57735027],
            ],
        ),
    ];
    let mut total = 0;
    for (name, grid, want) in cases {
        let sys = builtin_system(name).map_err(|e| e.to_string())?;
        let found =
            newton_search(&sys, &vec![(-1.0, 1.0); sys.arity], grid).map_err(|e| e.to_string())?;
        if found.len() != want.len() {
            return Err(format!(
                "{name}: {} roots, expected {}",
                found.len(),
                want.len()
            ));
        }
        for ((x, w), res) in found.roots.iter().zip(&want).zip(&found.residuals) {
            if x.iter().zip(w).any(|(a, b)| (a - b).abs() > 1e-8) || !(*res <= 1e-10) {
                return Err(format!("{name}: root {x:?} (residual {res:e}) vs {w:?}"));
            }
            verify_roots_build(name, x, 0.5, 1.0, tol())
                .map_err(|e| format!("{name} {x:?}: {e}"))?;
        }
        total += found.len();
    }
    Ok(format!("{total} roots"))
}

fn k_hessian_suite() -> Outcome {
    let mut r = rng(107);
    let mut worst = 0.0_f64;
    for n in 2..=6 {
        for _ in 0..20 {
            let f = random_matrix(&mut r, n, n, 1.0);
            let metric =
                BilinearForm::new(&f * f.transpose() + LinearMap::identity(n, n) * 0.5).unwrap();
            let h = random_matrix(&mut r, n, 1, 2.0).column(0).into_owned();
            let spec = MilnorSpec {
                dim: n,
                metric,
                h_vec: h.clone(),
            };
            let m = build_milnor(&spec, tol()).map_err(|e| format!("n={n}: {e}"))?;
            let lh = m.algebra().mult_operator(&h, Side::Left).unwrap().amax();
            if !(lh <= 1e-12 * m.algebra().scale().max(1.0)) {
                return Err(format!("n={n}: |L_h| = {lh:e}"));
            }
            let k = -spec.h_norm_sq();
            let rep =
                check_k_hessian(m.algebra(), m.metric(), k, tol()).map_err(|e| e.to_string())?;
            worst = worst.max(rep.max_residual);
            if !(rep.max_residual <= 1e-9) {
                return Err(format!("n={n}: k-Hessian residual {:e}", rep.max_residual));
            }
            let back = recognize_milnor(&m, k, tol()).map_err(|e| format!("n={n}: {e}"))?;
            let dev = (back - &h).amax();
            if !(dev <= 1e-8) {
                return Err(format!("n={n}: recognized h off by {dev:e}"));
            }
        }
    }
    for k in [-1.0, -4.0] {
        for family in [1u8, 2] {
            for i in 0..32 {
                let theta = std::f64::consts::TAU * i as f64 / 32.0;
                let m = kdim2_family(k, theta, family, tol())
                    .map_err(|e| format!("kdim2 f{family} k={k}: {e}"))?;
                let rep = check_k_hessian(m.algebra(), m.metric(), k, tol())
                    .map_err(|e| e.to_string())?;
                let tr = m.algebra().left_traces().amax();
                if !rep.holds || tr > 1e-12 {
                    return Err(format!("kdim2 f{family} k={k} theta={theta}"));
                }
            }
        }
    }
    Ok(format!("Milnor max residual {worst:e}"))
}

fn rn_theorem() -> Outcome {
    let mut r = rng(108);
    let mut worst = 0.0_f64;
    for n in 1..=6 {
        let rn = AlgebraStructure::from_fn(n, |i, j, k| if i == j && j == k { 1.0 } else { 0.0 })
            .unwrap();
        for _ in 0..50 {
            let q = random_invertible(&mut r, n);
            let a = rn.change_basis(&q).unwrap();
            let p = rn_isomorphism(&a, tol()).map_err(|e| format!("R^{n}: {e}"))?;
            let dev = a.change_basis(&p).unwrap().max_diff(&rn).unwrap();
            worst = worst.max(dev);
            if !(dev <= 1e-7) {
                return Err(format!("R^{n}: canonical residual {dev:e}"));
            }
        }
    }
    for (name, _, a) in samples(109) {
        if name == "rn_canonical" {
            continue;
        }
        match rn_isomorphism(&a, tol()) {
            Err(Error::PreconditionFailed(_)) => {}
            other => {
                return Err(format!(
                    "{name}: expected PreconditionFailed, got {other:?}"
                ))
            }
        }
    }
    Ok(format!("max canonical residual {worst:e}"))
}

fn solvability() -> Outcome {
    let mut count = 0;
    for (name, _, a) in samples(110) {
        if !is_solvable(&a.lie_bracket_constants(), tol()).map_err(|e| e.to_string())? {
            return Err(format!("{name} not solvable"));
        }
        count += 1;
    }
    if is_solvable(&sl2_bracket(), tol()).map_err(|e| e.to_string())? {
        return Err("sl2 reported solvable".into());
    }
    Ok(format!("{count} algebras solvable, sl2 not"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Koszul matrices", koszul_matrices),
        ("decomposition signatures", signatures),
        ("round trip", round_trip),
        ("Ricci oracle equivalence", ricci_oracle),
        ("Einstein constants", einstein),
        ("classification roots", classification_roots),
        ("k-Hessian suite", k_hessian_suite),
        ("R^n isomorphism", rn_theorem),
        ("solvability", solvability),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
