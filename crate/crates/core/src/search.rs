//! Grid-seeded Newton search for the scalar constraint systems whose roots
//! parametrize the LSPKs of dimension 3, 4 and 5.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{LinearMap, Tolerance, Vector};
use crate::catalog::{catalog_verify, Params};
use crate::error::{Error, Result};
use crate::forms::PredicateReport;

pub const FD_STEP: f64 = 1e-7;
pub const MAX_ITERS: usize = 60;
pub const DIVERGENCE: f64 = 10.0;
pub const ROOT_RESIDUAL: f64 = 1e-10;
pub const DEDUP_RADIUS: f64 = 1e-6;

#[derive(Clone, Copy)]
pub struct PolySystem {
    pub name: &'static str,
    pub arity: usize,
    residual: fn(&[f64]) -> Vec<f64>,
}

impl std::fmt::Debug for PolySystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PolySystem")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .finish()
    }
}

impl PolySystem {
    pub fn new(name: &'static str, arity: usize, residual: fn(&[f64]) -> Vec<f64>) -> Self {
        PolySystem {
            name,
            arity,
            residual,
        }
    }

    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        (self.residual)(x)
    }

    fn norm(&self, x: &[f64]) -> f64 {
        self.residual(x).iter().fold(0.0_f64, |m, r| m.max(r.abs()))
    }
}

pub const SYSTEMS: [&str; 3] = ["dim3_case3", "dim4", "dim5"];

/// `dim3_case3`: `6a^2 - 1`; `dim4`: `8 alpha^2 - 1`;
/// `dim5` in `(alpha, gamma)`: `(8 alpha^2 + 2 alpha gamma - 1, 6 gamma^2 + 4 alpha gamma - 1)`.
pub fn builtin_system(name: &str) -> Result<PolySystem> {
    match name {
        "dim3_case3" => Ok(PolySystem::new("dim3_case3", 1, |x| {
            vec![6.0 * x[0] * x[0] - 1.0]
        })),
        "dim4" => Ok(PolySystem::new("dim4", 1, |x| {
            vec![8.0 * x[0] * x[0] - 1.0]
        })),
        "dim5" => Ok(PolySystem::new("dim5", 2, |x| {
            let (a, g) = (x[0], x[1]);
            vec![
                8.0 * a * a + 2.0 * a * g - 1.0,
                6.0 * g * g + 4.0 * a * g - 1.0,
            ]
        })),
        other => Err(Error::UnknownSystem(other.into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }
}

fn newton(sys: &PolySystem, seed: Vec<f64>) -> Option<Vec<f64>> {
    let k = sys.arity;
    let mut x = seed;
    for _ in 0..MAX_ITERS {
        let f = sys.residual(&x);
        let m = f.len();
        if f.iter().all(|r| r.abs() <= ROOT_RESIDUAL * 1e-3) {
            break;
        }
        let mut jac = LinearMap::zeros(m, k);
        for c in 0..k {
            let mut xp = x.clone();
            xp[c] += FD_STEP;
            let fp = sys.residual(&xp);
            for r in 0..m {
                jac[(r, c)] = (fp[r] - f[r]) / FD_STEP;
            }
        }
        let step = jac
            .svd(true, true)
            .solve(&Vector::from_vec(f), 1e-14)
            .ok()?;
        for c in 0..k {
            x[c] -= step[c];
        }
        if x.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE) {
            return None;
        }
        if step.amax() < 1e-15 {
            break;
        }
    }
    Some(x)
}

fn grid_seeds(bounds: &[(f64, f64)], grid: usize) -> Vec<Vec<f64>> {
    let mut seeds = vec![Vec::new()];
    for &(lo, hi) in bounds {
        let mut next = Vec::with_capacity(seeds.len() * grid);
        for s in &seeds {
            for g in 0..grid {
                let mut p = s.clone();
                p.push(lo + (hi - lo) * g as f64 / (grid - 1) as f64);
                next.push(p);
            }
        }
        seeds = next;
    }
    seeds
}

/// Newton iterations from every node of a uniform grid over `bounds`.
/// Converged points inside the box with residual at most `1e-10` are kept,
/// deduplicated and sorted lexicographically.
pub fn newton_search(sys: &PolySystem, bounds: &[(f64, f64)], grid: usize) -> Result<RootSet> {
    if bounds.len() != sys.arity {
        return Err(Error::DimensionMismatch {
            expected: sys.arity,
            got: bounds.len(),
        });
    }
    if grid < 2 {
        return Err(Error::ParamOutOfRange {
            name: "grid".into(),
            value: grid as f64,
        });
    }
    let inside = |x: &[f64]| {
        x.iter()
            .zip(bounds)
            .all(|(v, &(lo, hi))| lo - 1e-12 <= *v && *v <= hi + 1e-12)
    };
    let mut found: Vec<Vec<f64>> = grid_seeds(bounds, grid)
        .into_par_iter()
        .filter_map(|s| newton(sys, s))
        .filter(|x| inside(x) && sys.norm(x) <= ROOT_RESIDUAL)
        .collect();
    found.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    let mut roots: Vec<Vec<f64>> = Vec::new();
    for x in found {
        let dup = roots
            .iter()
            .any(|r| r.iter().zip(&x).all(|(p, q)| (p - q).abs() <= DEDUP_RADIUS));
        if !dup {
            roots.push(x);
        }
    }
    let residuals = roots.iter().map(|r| sys.norm(r)).collect();
    Ok(RootSet { roots, residuals })
}

/// Feeds a root into the matching catalog family and verifies it. The root
/// must match one of the family's exact parameter values within `1e-6`.
pub fn verify_roots_build(
    sys_name: &str,
    root: &[f64],
    beta: f64,
    lambda: f64,
    tol: Tolerance,
) -> Result<PredicateReport> {
    let sys = builtin_system(sys_name)?;
    if root.len() != sys.arity {
        return Err(Error::DimensionMismatch {
            expected: sys.arity,
            got: root.len(),
        });
    }
    let broken = || Error::FixtureBroken {
        name: sys_name.into(),
        predicate: "root".into(),
    };
    if !(sys.norm(root) <= 1e-6) {
        return Err(broken());
    }
    let near = |a: f64, b: f64| (a - b).abs() <= 1e-6;
    let sign = |v: f64| if v < 0.0 { -1.0 } else { 1.0 };
    let mut p = Params::new();
    let entry = match sys_name {
        "dim3_case3" => {
            p.insert("sign".into(), sign(root[0]));
            "lspk_dim3_case3"
        }
        "dim4" => {
            p.insert("alpha_sign".into(), sign(root[0]));
            p.insert("beta".into(), beta);
            p.insert("lambda".into(), lambda);
            "lspk_dim4"
        }
        _ => {
            let branch = (0..4)
                .find(|&b| {
                    let (a, g) = crate::catalog::dim5_branch(b).expect("branch in range");
                    near(a, root[0]) && near(g, root[1])
                })
                .ok_or_else(broken)?;
            p.insert("branch".into(), branch as f64);
            p.insert("beta".into(), beta);
            p.insert("lambda".into(), lambda);
            "lspk_dim5"
        }
    };
    catalog_verify(entry, &p, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn residual_examples() {
        let a = 1.0 / (2.0 * 2f64.sqrt());
        assert!(builtin_system("dim4").unwrap().residual(&[a])[0].abs() < 1e-15);
        let r = builtin_system("dim5")
            .unwrap()
            .residual(&[-3f64.sqrt() / 4.0, 1.0 / 3f64.sqrt()]);
        assert!(r.iter().all(|v| v.abs() < 1e-15));
        assert_eq!(
            builtin_system("dim3_case3").unwrap().residual(&[0.0]),
            vec![-1.0]
        );
        assert!(matches!(
            builtin_system("dim6"),
            Err(Error::UnknownSystem(_))
        ));
    }

    #[test]
    fn dim4_roots() {
        let s = newton_search(&builtin_system("dim4").unwrap(), &[(-1.0, 1.0)], 16).unwrap();
        assert_eq!(s.len(), 2);
        let want = 1.0 / 8f64.sqrt();
        assert!((s.roots[0][0] + want).abs() < 1e-12 && (s.roots[1][0] - want).abs() < 1e-12);
    }

    #[test]
    fn dim5_roots_and_builds() {
        let s = newton_search(
            &builtin_system("dim5").unwrap(),
            &[(-1.0, 1.0), (-1.0, 1.0)],
            32,
        )
        .unwrap();
        assert_eq!(s.len(), 4);
        for r in &s.roots {
            verify_roots_build("dim5", r, 0.0, 1.0, Tolerance::default()).unwrap();
        }
    }

    #[test]
    fn bad_grid() {
        let sys = builtin_system("dim4").unwrap();
        assert!(newton_search(&sys, &[(-1.0, 1.0)], 1).is_err());
        assert!(newton_search(&sys, &[(-1.0, 1.0), (0.0, 1.0)], 4).is_err());
    }

    #[test]
    fn non_root_rejected() {
        let r = verify_roots_build("dim4", &[0.3], 0.0, 0.0, Tolerance::default());
        assert!(matches!(r, Err(Error::FixtureBroken { .. })));
    }
}
