//! Curvature of left-invariant Hessian structures and of the Kähler metric
//! on the tangent bundle, reduced to constant-coefficient matrix algebra.
//!
//! The tangent bundle is modelled on `R^{2n}`: coordinates `0..n` hold the
//! horizontal lift, `n..2n` the vertical lift, and the lifted metric is
//! `diag(g, g)`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{basis_vector, AlgebraStructure, LinearMap, Tolerance, Vector};
use crate::construction::NamedResidual;
use crate::error::{Error, Result};
use crate::forms::{
    check_jacobi, check_left_symmetric, is_positive_definite, koszul_form, BilinearForm,
};
use crate::linalg::{commutator, orthonormal_frame, ser, skew_residual, symmetric_residual};

/// An algebra with a positive definite scalar product.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricAlgebra {
    algebra: AlgebraStructure,
    metric: BilinearForm,
}

impl MetricAlgebra {
    pub fn new(algebra: AlgebraStructure, metric: BilinearForm, tol: Tolerance) -> Result<Self> {
        if metric.dim() != algebra.dim() {
            return Err(Error::DimensionMismatch {
                expected: algebra.dim(),
                got: metric.dim(),
            });
        }
        let pd = is_positive_definite(&metric, tol);
        if !pd.holds {
            return Err(Error::NotPositiveDefinite {
                min_eigenvalue: -pd.max_residual,
            });
        }
        Ok(Self { algebra, metric })
    }

    pub fn algebra(&self) -> &AlgebraStructure {
        &self.algebra
    }

    pub fn metric(&self) -> &BilinearForm {
        &self.metric
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim()
    }
}

/// The product with metric-skew left multiplications whose commutator is
/// `bracket`: `2<x*y, z> = <[x,y],z> - <[y,z],x> + <[z,x],y>`.
pub fn levi_civita_product(
    bracket: &AlgebraStructure,
    metric: &BilinearForm,
    tol: Tolerance,
) -> Result<AlgebraStructure> {
    let n = bracket.dim();
    if metric.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: metric.dim(),
        });
    }
    match check_jacobi(bracket, tol) {
        Ok(r) if r.holds => {}
        Ok(r) => {
            return Err(Error::NotLieBracket(format!(
                "Jacobi residual {:e}",
                r.max_residual
            )))
        }
        Err(Error::NotAntisymmetric { residual }) => {
            return Err(Error::NotLieBracket(format!(
                "antisymmetry residual {residual:e}"
            )))
        }
        Err(e) => return Err(e),
    }
    let g = metric.matrix();
    let ginv = g.clone().try_inverse().ok_or(Error::SingularMetric)?;
    // low[i][j][k] = <[e_i, e_j], e_k>
    let lowered: Vec<Vector> = (0..n * n)
        .map(|idx| g * bracket.basis_product(idx / n, idx % n))
        .collect();
    let low = |i: usize, j: usize, k: usize| lowered[i * n + j][k];
    let mut c = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            let v = Vector::from_fn(n, |k, _| 0.5 * (low(i, j, k) - low(j, k, i) + low(k, i, j)));
            let up = &ginv * v;
            c[(i * n + j) * n..(i * n + j + 1) * n].copy_from_slice(up.as_slice());
        }
    }
    let star = AlgebraStructure::new(n, c)?;
    let thr = tol.scaled(bracket.scale() * g.amax().max(1.0) * ginv.amax().max(1.0));
    let skew = (0..n).fold(0.0_f64, |m, i| m.max(skew_residual(&star.left_basis(i), g)));
    let torsion = star.lie_bracket_constants().max_diff(bracket)?;
    if skew > thr || torsion > thr {
        return Err(Error::VerificationFailed(format!(
            "Levi-Civita product: skew residual {skew:e}, torsion residual {torsion:e}"
        )));
    }
    Ok(star)
}

/// Left multiplications of the Levi-Civita product and the difference
/// operators `gamma_i = Lbar_i - L_i` for each basis vector.
struct Connection {
    n: usize,
    lbar: Vec<LinearMap>,
    gamma: Vec<LinearMap>,
}

impl Connection {
    fn new(m: &MetricAlgebra, tol: Tolerance) -> Result<Self> {
        let a = m.algebra();
        let star = levi_civita_product(&a.lie_bracket_constants(), m.metric(), tol)?;
        let n = a.dim();
        let lbar: Vec<LinearMap> = (0..n).map(|i| star.left_basis(i)).collect();
        let gamma = (0..n).map(|i| &lbar[i] - a.left_basis(i)).collect();
        Ok(Self { n, lbar, gamma })
    }

    fn combine(&self, ops: &[LinearMap], x: &Vector) -> LinearMap {
        let mut out = LinearMap::zeros(self.n, self.n);
        for (i, op) in ops.iter().enumerate() {
            if x[i] != 0.0 {
                out += op * x[i];
            }
        }
        out
    }

    fn gamma_of(&self, x: &Vector) -> LinearMap {
        self.combine(&self.gamma, x)
    }

    fn lbar_of(&self, x: &Vector) -> LinearMap {
        self.combine(&self.lbar, x)
    }

    /// `(D_X gamma)(Y, Z) = Lbar_X(gamma_Y Z) - gamma_{Lbar_X Y} Z - gamma_Y(Lbar_X Z)`.
    fn d_gamma(&self, x: &Vector, y: &Vector, z: &Vector) -> Vector {
        let lx = self.lbar_of(x);
        let gy = self.gamma_of(y);
        &lx * (&gy * z) - self.gamma_of(&(&lx * y)) * z - gy * (&lx * z)
    }

    /// Curvature computed from the Levi-Civita product:
    /// `K(X,Y) = Lbar_{[X,Y]} - [Lbar_X, Lbar_Y]`.
    fn k_direct(&self, bracket: &AlgebraStructure, x: &Vector, y: &Vector) -> LinearMap {
        let br = bracket.left_operator_unchecked(x) * y;
        self.lbar_of(&br) - commutator(&self.lbar_of(x), &self.lbar_of(y))
    }
}

/// `gamma_x = Lbar_x - L_x`.
pub fn gamma_operator(m: &MetricAlgebra, x: &Vector, tol: Tolerance) -> Result<LinearMap> {
    if x.len() != m.dim() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            got: x.len(),
        });
    }
    Ok(Connection::new(m, tol)?.gamma_of(x))
}

/// Koszul 1-form `alpha(X) = tr(gamma_X)`, computed through the metric.
pub fn koszul_one_form(m: &MetricAlgebra, tol: Tolerance) -> Result<Vector> {
    let conn = Connection::new(m, tol)?;
    Ok(Vector::from_fn(m.dim(), |i, _| conn.gamma[i].trace()))
}

/// Second Koszul form `beta(X,Y) = (nabla_X alpha)(Y) = -alpha(X.Y)`, with
/// `alpha` computed from the Levi-Civita product of the given metric.
pub fn second_koszul_form(m: &MetricAlgebra, tol: Tolerance) -> Result<BilinearForm> {
    let alpha = koszul_one_form(m, tol)?;
    let a = m.algebra();
    let n = a.dim();
    let beta = DMatrix::from_fn(n, n, |i, j| -alpha.dot(&a.basis_product(i, j)));
    BilinearForm::new(beta)
}

/// Base curvature: `K(e_i, e_j) = [gamma_i, gamma_j]` stored at `i * n + j`,
/// the same operators from the Levi-Civita product, and the Ricci form.
#[derive(Debug, Clone, Serialize)]
pub struct BaseCurvature {
    #[serde(serialize_with = "ser::matrices")]
    pub k: Vec<LinearMap>,
    #[serde(serialize_with = "ser::matrices")]
    pub k_direct: Vec<LinearMap>,
    /// `tr(gamma_X gamma_Y) - tr(gamma_{gamma_X Y})`.
    pub ricci: BilinearForm,
    /// Max-norm of `k - k_direct`.
    pub direct_residual: f64,
}

pub fn base_curvature(m: &MetricAlgebra, tol: Tolerance) -> Result<BaseCurvature> {
    let conn = Connection::new(m, tol)?;
    let n = m.dim();
    let bracket = m.algebra().lie_bracket_constants();
    let mut k = Vec::with_capacity(n * n);
    let mut k_direct = Vec::with_capacity(n * n);
    let mut direct_residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let kg = commutator(&conn.gamma[i], &conn.gamma[j]);
            let kd = conn.k_direct(&bracket, &basis_vector(n, i), &basis_vector(n, j));
            direct_residual = direct_residual.max((&kg - &kd).amax());
            k.push(kg);
            k_direct.push(kd);
        }
    }
    let ricci = DMatrix::from_fn(n, n, |i, j| {
        let gxy = &conn.gamma[i] * basis_vector(n, j);
        (&conn.gamma[i] * &conn.gamma[j]).trace() - conn.gamma_of(&gxy).trace()
    });
    Ok(BaseCurvature {
        k,
        k_direct,
        ricci: BilinearForm::new(ricci)?,
        direct_residual,
    })
}

/// Ricci curvature of the lifted metric, in blocks over the algebra basis.
#[derive(Debug, Clone, Serialize)]
pub struct CurvatureReport {
    pub base_ricci: BilinearForm,
    pub tb_ricci_hh: BilinearForm,
    pub tb_ricci_vv: BilinearForm,
    #[serde(serialize_with = "ser::matrix")]
    pub tb_ricci_hv: DMatrix<f64>,
    pub beta: BilinearForm,
    pub einstein_mu: Option<f64>,
    /// Max-norm of `hh + beta`, `vv + beta` and `hv`.
    pub oracle_residual: f64,
    /// Identities of a Hessian pair evaluated along the way.
    pub identities: Vec<NamedResidual>,
}

/// Curvature `R(U,V)W` of the lifted metric for `U, V, W` in `R^{2n}`,
/// assembled bilinearly from the six lift formulas.
struct LiftedCurvature<'a> {
    conn: &'a Connection,
    bracket: AlgebraStructure,
}

impl LiftedCurvature<'_> {
    fn apply(&self, u: &Vector, v: &Vector, w: &Vector) -> Vector {
        let n = self.conn.n;
        let h = |x: &Vector| x.rows(0, n).into_owned();
        let vt = |x: &Vector| x.rows(n, n).into_owned();
        let (uh, uv, vh, vv, wh, wv) = (h(u), vt(u), h(v), vt(v), h(w), vt(w));
        let mut out_h = Vector::zeros(n);
        let mut out_v = Vector::zeros(n);

        // R(X^h, Y^h) = K(X, Y) on both lifts
        let k = self.conn.k_direct(&self.bracket, &uh, &vh);
        out_h += &k * &wh;
        out_v += &k * &wv;

        // R(X^v, Y^v) = [gamma_X, gamma_Y] on both lifts
        let gg = commutator(&self.conn.gamma_of(&uv), &self.conn.gamma_of(&vv));
        out_h += &gg * &wh;
        out_v += &gg * &wv;

        // R(X^h, Y^v) and R(Y^v, X^h) = -R(X^h, Y^v)
        let (mh, mv) = self.mixed(&uh, &vv, &wh, &wv);
        out_h += mh;
        out_v += mv;
        let (mh, mv) = self.mixed(&vh, &uv, &wh, &wv);
        out_h -= mh;
        out_v -= mv;

        let mut out = Vector::zeros(2 * n);
        out.rows_mut(0, n).copy_from(&out_h);
        out.rows_mut(n, n).copy_from(&out_v);
        out
    }

    /// `R(X^h, Y^v)` applied to `Z^h + T^v`, split into (h, v) parts.
    fn mixed(&self, x: &Vector, y: &Vector, z: &Vector, t: &Vector) -> (Vector, Vector) {
        let c = self.conn;
        let gxy = c.gamma_of(x) * y;
        // Z^h -> -(D_X gamma (Z, Y) + gamma_Z gamma_X Y)^v
        let v = -(c.d_gamma(x, z, y) + c.gamma_of(z) * &gxy);
        // T^v -> (D_X gamma (Y, T) + gamma_T gamma_X Y)^h
        let h = c.d_gamma(x, y, t) + c.gamma_of(t) * &gxy;
        (h, v)
    }
}

/// Ricci form of the lifted metric by contraction over a `2n` orthonormal
/// frame, compared with `-beta` on the diagonal blocks and `0` off them.
pub fn tangent_bundle_ricci(m: &MetricAlgebra, tol: Tolerance) -> Result<CurvatureReport> {
    let n = m.dim();
    let conn = Connection::new(m, tol)?;
    let bracket = m.algebra().lie_bracket_constants();
    let lifted = LiftedCurvature {
        conn: &conn,
        bracket,
    };
    let g = m.metric().matrix();
    let frame = orthonormal_frame(g)?;
    let mut ghat = DMatrix::zeros(2 * n, 2 * n);
    ghat.view_mut((0, 0), (n, n)).copy_from(g);
    ghat.view_mut((n, n), (n, n)).copy_from(g);
    let lifted_frame: Vec<Vector> = (0..2 * n)
        .map(|a| {
            let mut f = Vector::zeros(2 * n);
            let col = frame.column(a % n);
            f.rows_mut(if a < n { 0 } else { n }, n).copy_from(&col);
            f
        })
        .collect();

    let rows: Vec<Vec<f64>> = (0..2 * n)
        .into_par_iter()
        .map(|p| {
            let u = basis_vector(2 * n, p);
            (0..2 * n)
                .map(|q| {
                    let w = basis_vector(2 * n, q);
                    lifted_frame
                        .iter()
                        .map(|f| (lifted.apply(&u, f, &w).transpose() * &ghat * f)[(0, 0)])
                        .sum()
                })
                .collect()
        })
        .collect();
    let ric = DMatrix::from_fn(2 * n, 2 * n, |p, q| rows[p][q]);
    let hh = ric.view((0, 0), (n, n)).into_owned();
    let vv = ric.view((n, n), (n, n)).into_owned();
    let hv = ric.view((0, n), (n, n)).into_owned();
    let vh = ric.view((n, 0), (n, n)).into_owned();

    let beta = koszul_form(m.algebra());
    let b = beta.matrix();
    let oracle_residual = (&hh + b)
        .amax()
        .max((&vv + b).amax())
        .max(hv.amax())
        .max(vh.amax());
    let scale = m.algebra().scale() * m.algebra().scale() * g.amax().max(1.0);
    if !(oracle_residual <= 1e2 * tol.scaled(scale)) {
        return Err(Error::OracleMismatch {
            residual: oracle_residual,
        });
    }

    let base = base_curvature(m, tol)?;
    let identities = hessian_identities(m, &conn, &base);
    let mu = einstein_constant(&hh, g);
    let mu = (((&hh - g * mu).amax()) <= 1e2 * tol.scaled(scale)).then_some(mu);
    Ok(CurvatureReport {
        base_ricci: base.ricci,
        tb_ricci_hh: BilinearForm::new(hh)?,
        tb_ricci_vv: BilinearForm::new(vv)?,
        tb_ricci_hv: hv,
        beta,
        einstein_mu: mu,
        oracle_residual,
        identities,
    })
}

/// Least-squares `mu` with `ric ~ mu g`.
fn einstein_constant(ric: &DMatrix<f64>, g: &DMatrix<f64>) -> f64 {
    ric.dot(g) / g.dot(g)
}

fn hessian_identities(
    m: &MetricAlgebra,
    conn: &Connection,
    base: &BaseCurvature,
) -> Vec<NamedResidual> {
    let n = m.dim();
    let g = m.metric().matrix();
    let e = |i: usize| basis_vector(n, i);
    let gamma_sym = conn
        .gamma
        .iter()
        .fold(0.0_f64, |r, op| r.max(symmetric_residual(op, g)));
    let mut dg_swap = 0.0_f64;
    let mut dg_sym = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = conn.d_gamma(&e(i), &e(j), &e(k));
                dg_swap = dg_swap.max((&a - conn.d_gamma(&e(j), &e(i), &e(k))).amax());
                dg_sym = dg_sym.max((&a - conn.d_gamma(&e(i), &e(k), &e(j))).amax());
            }
        }
    }
    // H = sum gamma_{E_i} E_i is the metric dual of alpha = tr gamma
    let frame = orthonormal_frame(g).expect("metric checked positive definite");
    let mut h = Vector::zeros(n);
    let mut dh_rhs: Vec<Vector> = vec![Vector::zeros(n); n];
    for a in 0..n {
        let ea = frame.column(a).into_owned();
        h += conn.gamma_of(&ea) * &ea;
        for (x, acc) in dh_rhs.iter_mut().enumerate() {
            *acc += conn.d_gamma(&e(x), &ea, &ea);
        }
    }
    let alpha = Vector::from_fn(n, |i, _| conn.gamma[i].trace());
    let ginv = g
        .clone()
        .try_inverse()
        .expect("metric checked positive definite");
    let h_dual = (&h - &ginv * &alpha).amax();
    let dh = (0..n).fold(0.0_f64, |r, x| {
        r.max((&conn.lbar[x] * &h - &dh_rhs[x]).amax())
    });
    vec![
        NamedResidual::new("gamma-symmetric", gamma_sym, false),
        NamedResidual::new("d-gamma-symmetric", dg_sym, false),
        NamedResidual::new("d-gamma-swap", dg_swap, false),
        NamedResidual::new("curvature-gamma", base.direct_residual, false),
        NamedResidual::new("h-vector", h_dual, false),
        NamedResidual::new("d-h-vector", dh, false),
    ]
}

/// `mu` with `ric = mu g_hat` for `g = alpha_scale * B`; must be `-1/alpha_scale`.
pub fn einstein_check(a: &AlgebraStructure, alpha_scale: f64, tol: Tolerance) -> Result<f64> {
    if !(alpha_scale > 0.0 && alpha_scale.is_finite()) {
        return Err(Error::ParamOutOfRange {
            name: "alpha".into(),
            value: alpha_scale,
        });
    }
    let lsa = check_left_symmetric(a, tol);
    let b = koszul_form(a);
    let pd = is_positive_definite(&b, tol);
    if !lsa.holds || !pd.holds {
        return Err(Error::NotLspk(format!(
            "left-symmetric: {}, Koszul form positive definite: {}",
            lsa.holds, pd.holds
        )));
    }
    let m = MetricAlgebra::new(a.clone(), b.scaled(alpha_scale), tol)?;
    let report = tangent_bundle_ricci(&m, tol)?;
    let g = m.metric().matrix();
    let hh = report.tb_ricci_hh.matrix();
    let mu = einstein_constant(hh, g);
    let fit = (hh - g * mu)
        .amax()
        .max((report.tb_ricci_vv.matrix() - g * mu).amax())
        .max(report.tb_ricci_hv.amax());
    let scale = a.scale() * a.scale() * g.amax().max(1.0);
    let residual = fit.max((mu + 1.0 / alpha_scale).abs());
    if residual > 1e2 * tol.scaled(scale) {
        return Err(Error::NotEinstein { residual });
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn lspk2() -> AlgebraStructure {
        AlgebraStructure::from_products(
            2,
            &[
                (0, 0, vec![0.0, 1.0]),
                (1, 0, vec![0.5, 0.0]),
                (1, 1, vec![0.0, 1.0]),
            ],
        )
        .unwrap()
    }

    fn a0() -> AlgebraStructure {
        AlgebraStructure::from_products(2, &[(0, 0, vec![0.0, 1.0])]).unwrap()
    }

    fn with_koszul(a: AlgebraStructure, s: f64) -> MetricAlgebra {
        let b = koszul_form(&a).scaled(s);
        MetricAlgebra::new(a, b, tol()).unwrap()
    }

    #[test]
    fn levi_civita_examples() {
        let t = tol();
        let abelian = AlgebraStructure::zero(3).unwrap();
        let g = BilinearForm::new(DMatrix::from_row_slice(
            3,
            3,
            &[2.0, 0.3, 0.0, 0.3, 1.0, 0.1, 0.0, 0.1, 4.0],
        ))
        .unwrap();
        assert_eq!(levi_civita_product(&abelian, &g, t).unwrap().max_abs(), 0.0);

        let br = lspk2().lie_bracket_constants();
        let star = levi_civita_product(&br, &koszul_form(&lspk2()), t).unwrap();
        assert!((star.basis_product(0, 0) - Vector::from_vec(vec![0.0, 0.5])).amax() < 1e-15);

        let sl2_like = lspk2(); // not antisymmetric
        assert!(matches!(
            levi_civita_product(&sl2_like, &BilinearForm::identity(2), t),
            Err(Error::NotLieBracket(_))
        ));
    }

    #[test]
    fn gamma_examples() {
        let t = tol();
        let m = MetricAlgebra::new(a0(), BilinearForm::identity(2), t).unwrap();
        let e1 = basis_vector(2, 0);
        assert_eq!(gamma_operator(&m, &e1, t).unwrap(), -a0().left_basis(0));

        let m = with_koszul(lspk2(), 1.0);
        assert!(
            gamma_operator(&m, &basis_vector(2, 0), t)
                .unwrap()
                .trace()
                .abs()
                < 1e-15
        );
        assert!((gamma_operator(&m, &basis_vector(2, 1), t).unwrap().trace() + 1.5).abs() < 1e-15);

        let z = MetricAlgebra::new(
            AlgebraStructure::zero(2).unwrap(),
            BilinearForm::identity(2),
            t,
        )
        .unwrap();
        assert_eq!(gamma_operator(&z, &e1, t).unwrap().amax(), 0.0);
    }

    #[test]
    fn second_koszul_form_is_metric_independent() {
        let t = tol();
        for s in [1.0, 5.0] {
            let beta = second_koszul_form(&with_koszul(lspk2(), s), t).unwrap();
            assert!((beta.matrix() - DMatrix::identity(2, 2) * 1.5).amax() < 1e-14);
        }
        let m = MetricAlgebra::new(a0(), BilinearForm::identity(2), t).unwrap();
        assert_eq!(second_koszul_form(&m, t).unwrap().matrix().amax(), 0.0);
    }

    #[test]
    fn base_curvature_examples() {
        let t = tol();
        let m = MetricAlgebra::new(a0(), BilinearForm::identity(2), t).unwrap();
        assert_eq!(base_curvature(&m, t).unwrap().ricci.matrix().amax(), 0.0);

        let bc = base_curvature(&with_koszul(lspk2(), 1.0), t).unwrap();
        assert!(bc.direct_residual < 1e-14);
        assert!(bc.k[1].amax() > 0.1);

        let z = MetricAlgebra::new(
            AlgebraStructure::zero(3).unwrap(),
            BilinearForm::identity(3),
            t,
        )
        .unwrap();
        let bc = base_curvature(&z, t).unwrap();
        assert_eq!(bc.ricci.matrix().amax(), 0.0);
        assert!(bc.k.iter().all(|k| k.amax() == 0.0));
    }

    #[test]
    fn tangent_bundle_examples() {
        let t = tol();
        let r = tangent_bundle_ricci(&with_koszul(lspk2(), 1.0), t).unwrap();
        assert!((r.tb_ricci_hh.matrix() + DMatrix::identity(2, 2) * 1.5).amax() < 1e-13);
        assert!(r.tb_ricci_hv.amax() < 1e-13);
        assert_eq!(r.einstein_mu.map(|m| (m + 1.0).abs() < 1e-13), Some(true));
        for id in &r.identities {
            assert!(id.value < 1e-13, "{id:?}");
        }

        let m = MetricAlgebra::new(a0(), BilinearForm::identity(2), t).unwrap();
        let r = tangent_bundle_ricci(&m, t).unwrap();
        assert_eq!(r.oracle_residual, 0.0);
    }

    #[test]
    fn mismatched_metric_is_caught() {
        // the Euclidean metric is not Hessian for the two-dimensional LSPK
        let t = tol();
        let m = MetricAlgebra::new(
            lspk2(),
            BilinearForm::new(DMatrix::from_diagonal(&Vector::from_vec(vec![1.0, 2.0]))).unwrap(),
            t,
        )
        .unwrap();
        assert!(matches!(
            tangent_bundle_ricci(&m, t),
            Err(Error::OracleMismatch { .. })
        ));
    }

    #[test]
    fn einstein_examples() {
        let t = tol();
        assert!((einstein_check(&lspk2(), 1.0, t).unwrap() + 1.0).abs() < 1e-12);
        assert!((einstein_check(&lspk2(), 2.0, t).unwrap() + 0.5).abs() < 1e-12);
        assert!(matches!(
            einstein_check(&a0(), 1.0, t),
            Err(Error::NotLspk(_))
        ));
    }
}
