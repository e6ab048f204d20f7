//! Koszul form, positivity and the algebraic identity checks.
//!
//! Every predicate evaluates its identity on all basis triples and reports
//! the max-norm residual. A predicate holds when that residual is at most
//! `eps * max(1, max |C|)` (times the largest form entry for identities
//! that involve a bilinear form).

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::algebra::{AlgebraStructure, LinearMap, Tolerance, Vector};
use crate::error::{Error, Result};
use crate::linalg::{column_space, orthonormal_frame, symmetric_eigen};

/// A symmetric bilinear form, stored as its Gram matrix in the algebra basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearForm {
    matrix: DMatrix<f64>,
}

impl BilinearForm {
    /// Symmetrizes `m` on construction.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidConstants("non-finite form entry".into()));
        }
        let matrix = (&m + m.transpose()) * 0.5;
        Ok(Self { matrix })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> f64 {
        (x.transpose() * &self.matrix * y)[(0, 0)]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            matrix: &self.matrix * s,
        }
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        if self.dim() == 0 {
            return f64::INFINITY;
        }
        symmetric_eigen(&self.matrix).0[0]
    }

    /// Gram matrix in the basis given by the columns of `p`: `P^T M P`.
    pub fn transport(&self, p: &LinearMap) -> Self {
        Self {
            matrix: p.transpose() * &self.matrix * p,
        }
    }
}

impl Serialize for BilinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::linalg::rows_of(&self.matrix).serialize(s)
    }
}

/// Outcome of a residual check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredicateReport {
    pub holds: bool,
    pub max_residual: f64,
    pub threshold: f64,
    /// Basis indices `(i, j, k)` where the residual peaks.
    pub witness: Option<[usize; 3]>,
    /// Name of the worst sub-identity, for composite checks.
    pub failing: Option<String>,
}

impl PredicateReport {
    pub fn from_residual(max_residual: f64, threshold: f64, witness: Option<[usize; 3]>) -> Self {
        Self {
            holds: max_residual <= threshold,
            max_residual,
            threshold,
            witness,
            failing: None,
        }
    }

    /// Conjunction of two reports; keeps the witness of the worse ratio.
    pub fn and(self, other: PredicateReport) -> PredicateReport {
        let ratio = |r: &PredicateReport| r.max_residual / r.threshold.max(f64::MIN_POSITIVE);
        let holds = self.holds && other.holds;
        let mut worst = if ratio(&other) > ratio(&self) {
            other
        } else {
            self
        };
        worst.holds = holds;
        worst
    }

    pub(crate) fn named(mut self, name: &str) -> Self {
        self.failing = Some(name.to_string());
        self
    }
}

/// Max over basis triples of the max-norm of `f(i, j, k)`.
pub(crate) fn triple_residual(
    n: usize,
    mut f: impl FnMut(usize, usize, usize) -> f64,
) -> (f64, Option<[usize; 3]>) {
    let mut best = 0.0;
    let mut witness = None;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let r = f(i, j, k);
                if r > best || r.is_nan() {
                    best = r;
                    witness = Some([i, j, k]);
                }
            }
        }
    }
    (best, witness)
}

/// `B(x, y) = tr(L_{x.y})`.
pub fn koszul_form(a: &AlgebraStructure) -> BilinearForm {
    let n = a.dim();
    let traces = a.left_traces();
    let m = DMatrix::from_fn(n, n, |i, j| {
        (0..n).map(|k| a.get(i, j, k) * traces[k]).sum()
    });
    BilinearForm::new(m).expect("square finite matrix")
}

/// Components `-tr(L_{e_i})`.
pub fn trace_one_form(a: &AlgebraStructure) -> Vector {
    -a.left_traces()
}

/// Holds when the smallest eigenvalue exceeds `eps * max(1, max |F|)`.
///
/// The reported residual is the negated smallest eigenvalue and the threshold
/// is the negated bound, so the report still reads "residual <= threshold".
pub fn is_positive_definite(f: &BilinearForm, tol: Tolerance) -> PredicateReport {
    let lambda = f.min_eigenvalue();
    let bound = tol.scaled(f.matrix().amax());
    PredicateReport {
        holds: lambda > bound,
        max_residual: -lambda,
        threshold: -bound,
        witness: None,
        failing: None,
    }
}

pub fn check_left_symmetric(a: &AlgebraStructure, tol: Tolerance) -> PredicateReport {
    let (r, w) = triple_residual(a.dim(), |i, j, k| {
        (a.basis_associator(i, j, k) - a.basis_associator(j, i, k)).amax()
    });
    PredicateReport::from_residual(r, tol.scaled(a.scale()), w)
}

/// Right-symmetry `(x.y).z = (x.z).y`. Combine with [`check_left_symmetric`]
/// for the full Novikov property.
pub fn check_novikov(a: &AlgebraStructure, tol: Tolerance) -> PredicateReport {
    let n = a.dim();
    let (r, w) = triple_residual(n, |i, j, k| {
        let xy = a.basis_product(i, j);
        let xz = a.basis_product(i, k);
        let rz = a.right_basis(k);
        let ry = a.right_basis(j);
        (rz * xy - ry * xz).amax()
    });
    PredicateReport::from_residual(r, tol.scaled(a.scale()), w)
}

pub fn check_commutative(a: &AlgebraStructure, tol: Tolerance) -> PredicateReport {
    let n = a.dim();
    let (r, w) = triple_residual(n, |i, j, k| (a.get(i, j, k) - a.get(j, i, k)).abs());
    PredicateReport::from_residual(r, tol.scaled(a.scale()), w)
}

pub fn check_associative(a: &AlgebraStructure, tol: Tolerance) -> PredicateReport {
    let (r, w) = triple_residual(a.dim(), |i, j, k| a.basis_associator(i, j, k).amax());
    PredicateReport::from_residual(r, tol.scaled(a.scale()), w)
}

pub(crate) fn hessian_residual(
    a: &AlgebraStructure,
    g: &DMatrix<f64>,
) -> (f64, Option<[usize; 3]>) {
    // lower[(i, j)] = column of G (e_i . e_j), i.e. <e_i . e_j, e_.>
    let n = a.dim();
    let lowered: Vec<Vector> = (0..n * n)
        .map(|idx| g * a.basis_product(idx / n, idx % n))
        .collect();
    let low = |i: usize, j: usize, k: usize| lowered[i * n + j][k];
    triple_residual(n, |i, j, k| {
        let lhs = low(i, j, k) - low(j, i, k);
        let rhs = low(j, k, i) - low(i, k, j);
        (lhs - rhs).abs()
    })
}

fn form_check(a: &AlgebraStructure, f: &BilinearForm) -> Result<()> {
    if f.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: f.dim(),
        });
    }
    Ok(())
}

/// `<x.y - y.x, z> = <y.z, x> - <x.z, y>`.
pub fn check_hessian(
    a: &AlgebraStructure,
    f: &BilinearForm,
    tol: Tolerance,
) -> Result<PredicateReport> {
    form_check(a, f)?;
    let (r, w) = hessian_residual(a, f.matrix());
    let scale = a.scale() * f.matrix().amax().max(1.0);
    Ok(PredicateReport::from_residual(r, tol.scaled(scale), w))
}

/// Hessian identity plus
/// `ass(x,y,z) - ass(y,x,z) = k (<x,z> y - <y,z> x)`.
pub fn check_k_hessian(
    a: &AlgebraStructure,
    f: &BilinearForm,
    k: f64,
    tol: Tolerance,
) -> Result<PredicateReport> {
    let hess = check_hessian(a, f, tol)?.named("hessian");
    let n = a.dim();
    let g = f.matrix();
    let (r, w) = triple_residual(n, |i, j, l| {
        let mut d = a.basis_associator(i, j, l) - a.basis_associator(j, i, l);
        d[j] -= k * g[(i, l)];
        d[i] += k * g[(j, l)];
        d.amax()
    });
    let scale = a.scale() * a.scale() * g.amax().max(1.0) * k.abs().max(1.0);
    let curv = PredicateReport::from_residual(r, tol.scaled(scale), w).named("curvature");
    Ok(hess.and(curv))
}

/// The Hessian identity for the Koszul form of `a`.
pub fn check_koszul_identity(a: &AlgebraStructure, tol: Tolerance) -> PredicateReport {
    let b = koszul_form(a);
    let (r, w) = hessian_residual(a, b.matrix());
    let scale = a.scale() * b.matrix().amax().max(1.0);
    PredicateReport::from_residual(r, tol.scaled(scale), w)
}

fn antisymmetry_residual(br: &AlgebraStructure) -> f64 {
    let n = br.dim();
    triple_residual(n, |i, j, k| (br.get(i, j, k) + br.get(j, i, k)).abs()).0
}

/// Jacobi identity of an antisymmetric bracket.
pub fn check_jacobi(bracket: &AlgebraStructure, tol: Tolerance) -> Result<PredicateReport> {
    let thr = tol.scaled(bracket.scale());
    let anti = antisymmetry_residual(bracket);
    if anti > thr {
        return Err(Error::NotAntisymmetric { residual: anti });
    }
    let n = bracket.dim();
    let (r, w) = triple_residual(n, |i, j, k| {
        // [[x,y],z] + [[y,z],x] + [[z,x],y]
        let xy = bracket.basis_product(i, j);
        let yz = bracket.basis_product(j, k);
        let zx = bracket.basis_product(k, i);
        let t =
            bracket.right_basis(k) * xy + bracket.right_basis(i) * yz + bracket.right_basis(j) * zx;
        t.amax()
    });
    Ok(PredicateReport::from_residual(
        r,
        tol.scaled(bracket.scale() * bracket.scale()),
        w,
    ))
}

/// Dimensions of the derived series `g, [g,g], [[g,g],[g,g]], ...` until it
/// stabilizes.
pub fn derived_series_dims(bracket: &AlgebraStructure, tol: Tolerance) -> Result<Vec<usize>> {
    let thr = tol.scaled(bracket.scale());
    let anti = antisymmetry_residual(bracket);
    if anti > thr {
        return Err(Error::NotAntisymmetric { residual: anti });
    }
    let n = bracket.dim();
    let mut basis: Vec<Vector> = (0..n).map(|i| crate::algebra::basis_vector(n, i)).collect();
    let mut dims = vec![n];
    loop {
        let m = basis.len();
        let mut cols = Vec::new();
        for a in 0..m {
            let la = bracket.left_operator_unchecked(&basis[a]);
            for b in &basis[a + 1..] {
                cols.push(&la * b);
            }
        }
        let next = if cols.is_empty() {
            Vec::new()
        } else {
            let mat = DMatrix::from_columns(&cols);
            column_space(&mat, tol.eps(), thr)
        };
        dims.push(next.len());
        if next.is_empty() || next.len() == m {
            break;
        }
        basis = next;
    }
    Ok(dims)
}

/// True when the derived series reaches zero.
pub fn is_solvable(bracket: &AlgebraStructure, tol: Tolerance) -> Result<bool> {
    Ok(derived_series_dims(bracket, tol)?.last() == Some(&0))
}

/// An isomorphism onto `R^n` with its componentwise product.
///
/// The commuting family `{L_{e_i}}` is symmetric with respect to the Koszul
/// form, so a generic combination has simple spectrum and its eigenvectors
/// span the idempotent lines. Each eigenvector `v` satisfies `v.v = t v` and
/// is rescaled to the idempotent `v / t`. Returns `P` whose columns are the
/// idempotents, so `change_basis(a, P)` is the canonical product.
pub fn rn_isomorphism(a: &AlgebraStructure, tol: Tolerance) -> Result<LinearMap> {
    let n = a.dim();
    let lsa = check_left_symmetric(a, tol);
    let comm = check_commutative(a, tol);
    let b = koszul_form(a);
    let pd = is_positive_definite(&b, tol);
    if !(lsa.holds && comm.holds && pd.holds) {
        return Err(Error::PreconditionFailed(format!(
            "needs a commutative left-symmetric algebra with positive definite Koszul form \
             (left-symmetric: {}, commutative: {}, positive definite: {})",
            lsa.holds, comm.holds, pd.holds
        )));
    }
    let frame = orthonormal_frame(b.matrix())?;
    let frame_inv = frame.clone().try_inverse().ok_or(Error::SingularMetric)?;
    let lefts: Vec<LinearMap> = (0..n).map(|i| a.left_basis(i)).collect();
    let threshold = 1e2 * tol.scaled(a.scale());
    let golden = 0.618_033_988_749_894_9_f64;
    let mut last_residual = f64::INFINITY;

    for attempt in 0..8 {
        let coeffs: Vec<f64> = (0..n)
            .map(|i| {
                let x =
                    ((i + 1) as f64 * golden + attempt as f64 * std::f64::consts::SQRT_2).fract();
                x - 0.5
            })
            .collect();
        let mut comb = LinearMap::zeros(n, n);
        for (c, l) in coeffs.iter().zip(&lefts) {
            comb += l * *c;
        }
        let sym = &frame_inv * comb * &frame;
        let (vals, vecs) = symmetric_eigen(&sym);
        let spread = vals.amax().max(1e-300);
        let min_gap = (1..n)
            .map(|i| vals[i] - vals[i - 1])
            .fold(f64::INFINITY, f64::min);
        if n > 1 && min_gap < 1e-6 * spread {
            continue;
        }
        let mut p = LinearMap::zeros(n, n);
        let mut ok = true;
        for col in 0..n {
            let v = &frame * vecs.column(col);
            let vv = a.multiply(&v, &v)?;
            let t = b.eval(&vv, &v) / b.eval(&v, &v);
            if !(t.abs() > tol.eps()) {
                ok = false;
                break;
            }
            p.set_column(col, &(v / t));
        }
        if !ok {
            continue;
        }
        let Ok(image) = a.change_basis(&p) else {
            continue;
        };
        let mut residual = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let want = if i == j && j == k { 1.0 } else { 0.0 };
                    residual = residual.max((image.get(i, j, k) - want).abs());
                }
            }
        }
        if residual <= threshold {
            return Ok(p);
        }
        last_residual = last_residual.min(residual);
    }
    Err(Error::DiagonalizationFailed {
        residual: last_residual,
        threshold,
    })
}
