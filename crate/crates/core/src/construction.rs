//! Building LSPK algebras from block data, the two corollary families, and
//! Milnor / two-dimensional k-Hessian algebras.
//!
//! Block data lives on `h1 + h2`, each with its own scalar product. The
//! assembled algebra uses the basis `(h1 basis, h2 basis, H)`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{basis_vector, AlgebraStructure, LinearMap, Tolerance, Vector};
use crate::error::{Error, Result};
use crate::forms::{
    check_k_hessian, hessian_residual, is_positive_definite, koszul_form, BilinearForm,
    PredicateReport,
};
use crate::geometry::MetricAlgebra;
use crate::linalg::{commutator, null_space, ser, skew_residual};

/// A bilinear map `V x V -> W` stored by its values on basis pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearMap {
    dim_in: usize,
    dim_out: usize,
    values: Vec<Vector>,
}

impl BilinearMap {
    pub fn zeros(dim_in: usize, dim_out: usize) -> Self {
        Self {
            dim_in,
            dim_out,
            values: vec![Vector::zeros(dim_out); dim_in * dim_in],
        }
    }

    pub fn from_fn(
        dim_in: usize,
        dim_out: usize,
        mut f: impl FnMut(usize, usize) -> Vector,
    ) -> Self {
        let values = (0..dim_in * dim_in)
            .map(|idx| f(idx / dim_in.max(1), idx % dim_in.max(1)))
            .collect();
        Self {
            dim_in,
            dim_out,
            values,
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    /// Value on the basis pair `(a, b)`.
    pub fn get(&self, a: usize, b: usize) -> &Vector {
        &self.values[a * self.dim_in + b]
    }

    pub fn eval(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim_out);
        for a in 0..self.dim_in {
            if x[a] == 0.0 {
                continue;
            }
            for b in 0..self.dim_in {
                if y[b] != 0.0 {
                    out += self.get(a, b) * (x[a] * y[b]);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.amax()))
    }

    pub fn max_diff(&self, other: &BilinearMap) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).amax()))
    }
}

impl Serialize for BilinearMap {
    /// Nested as `[a][b] -> coordinates`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<&[f64]>> = (0..self.dim_in)
            .map(|a| {
                (0..self.dim_in)
                    .map(|b| self.get(a, b).as_slice())
                    .collect()
            })
            .collect();
        rows.serialize(s)
    }
}

/// Input of the block construction: scalar products on `h1`, `h2`, the
/// product on `h2`, skew blocks `B1`, `B2` and the two actions.
///
/// `rho1[a]` acts on `h2` and is the image of the `a`-th basis vector of
/// `h1`; `rho2[b]` acts on `h1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LSPKData {
    pub dim1: usize,
    pub dim2: usize,
    pub metric1: BilinearForm,
    pub metric2: BilinearForm,
    pub circ2: Option<AlgebraStructure>,
    #[serde(serialize_with = "ser::matrix")]
    pub b1: LinearMap,
    #[serde(serialize_with = "ser::matrix")]
    pub b2: LinearMap,
    #[serde(serialize_with = "ser::matrices")]
    pub rho1: Vec<LinearMap>,
    #[serde(serialize_with = "ser::matrices")]
    pub rho2: Vec<LinearMap>,
}

fn shape(m: &LinearMap, r: usize, c: usize, what: &str) -> Result<()> {
    if m.nrows() != r || m.ncols() != c {
        return Err(Error::InvalidConstants(format!(
            "{what} is {}x{}, expected {r}x{c}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

impl LSPKData {
    /// Checks shapes only; the algebraic conditions are [`validate_data`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        metric1: BilinearForm,
        metric2: BilinearForm,
        circ2: Option<AlgebraStructure>,
        b1: LinearMap,
        b2: LinearMap,
        rho1: Vec<LinearMap>,
        rho2: Vec<LinearMap>,
    ) -> Result<Self> {
        let dim1 = metric1.dim();
        let dim2 = metric2.dim();
        match (&circ2, dim2) {
            (None, 0) => {}
            (Some(c), d) if c.dim() == d => {}
            (None, d) => {
                return Err(Error::InvalidConstants(format!(
                    "missing product on h2 of dimension {d}"
                )))
            }
            (Some(c), d) => {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: c.dim(),
                })
            }
        }
        shape(&b1, dim1, dim1, "B1")?;
        shape(&b2, dim2, dim2, "B2")?;
        if rho1.len() != dim1 || rho2.len() != dim2 {
            return Err(Error::InvalidConstants(format!(
                "expected {dim1} maps rho1 and {dim2} maps rho2, got {} and {}",
                rho1.len(),
                rho2.len()
            )));
        }
        for m in &rho1 {
            shape(m, dim2, dim2, "rho1")?;
        }
        for m in &rho2 {
            shape(m, dim1, dim1, "rho2")?;
        }
        Ok(Self {
            dim1,
            dim2,
            metric1,
            metric2,
            circ2,
            b1,
            b2,
            rho1,
            rho2,
        })
    }

    /// Data with `h2 = 0`: the family of the first corollary.
    pub fn h1_only(metric1: BilinearForm, b1: LinearMap) -> Result<Self> {
        let d = metric1.dim();
        Self::new(
            metric1,
            BilinearForm::identity(0),
            None,
            b1,
            LinearMap::zeros(0, 0),
            vec![LinearMap::zeros(0, 0); d],
            Vec::new(),
        )
    }

    /// `rho = dim h1 / 2 + dim h2 + 1`.
    pub fn rho(&self) -> f64 {
        0.5 * self.dim1 as f64 + self.dim2 as f64 + 1.0
    }

    pub fn dim(&self) -> usize {
        self.dim1 + self.dim2 + 1
    }

    pub fn rho1_of(&self, x: &Vector) -> LinearMap {
        let mut m = LinearMap::zeros(self.dim2, self.dim2);
        for (a, r) in self.rho1.iter().enumerate() {
            m += r * x[a];
        }
        m
    }

    pub fn rho2_of(&self, y: &Vector) -> LinearMap {
        let mut m = LinearMap::zeros(self.dim1, self.dim1);
        for (b, r) in self.rho2.iter().enumerate() {
            m += r * y[b];
        }
        m
    }

    fn circ2_mul(&self, x: &Vector, y: &Vector) -> Vector {
        match &self.circ2 {
            Some(c) => c.left_operator_unchecked(x) * y,
            None => Vector::zeros(0),
        }
    }

    fn scale(&self) -> f64 {
        let mut s = self.b1.amax().max(self.b2.amax());
        s = s
            .max(self.metric1.matrix().amax())
            .max(self.metric2.matrix().amax());
        for m in self.rho1.iter().chain(&self.rho2) {
            s = s.max(m.amax());
        }
        if let Some(c) = &self.circ2 {
            s = s.max(c.max_abs());
        }
        s.max(1.0)
    }
}

/// Max residual of one named identity. `vacuous` marks identities whose
/// quantifier ranges over an empty block.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedResidual {
    pub name: String,
    pub value: f64,
    pub vacuous: bool,
}

impl NamedResidual {
    pub(crate) fn new(name: &str, value: f64, vacuous: bool) -> Self {
        Self {
            name: name.to_string(),
            value,
            vacuous,
        }
    }
}

/// `omega1: h1 x h1 -> h2` and `omega2: h2 x h2 -> h1`, obtained from the
/// actions through the scalar products.
pub fn derive_omegas(data: &LSPKData) -> Result<(BilinearMap, BilinearMap)> {
    let (d1, d2) = (data.dim1, data.dim2);
    let g1 = data.metric1.matrix();
    let g2 = data.metric2.matrix();
    for (d, metric) in [(d1, &data.metric1), (d2, &data.metric2)] {
        if d > 0 && !is_positive_definite(metric, Tolerance::default()).holds {
            return Err(Error::SingularMetric);
        }
    }
    let inverse = |g: &DMatrix<f64>| match g.nrows() {
        0 => Some(DMatrix::zeros(0, 0)),
        _ => g.clone().try_inverse(),
    };
    let g1inv = inverse(g1).ok_or(Error::SingularMetric)?;
    let g2inv = inverse(g2).ok_or(Error::SingularMetric)?;
    // <omega1(x, y), z>_2 = <rho2(z) x, y>_1 + <rho2(z) y, x>_1
    let omega1 = BilinearMap::from_fn(d1, d2, |a, b| {
        let lowered = Vector::from_fn(d2, |c, _| {
            let r = &data.rho2[c];
            let gr = g1 * r;
            gr[(b, a)] + gr[(a, b)]
        });
        &g2inv * lowered
    });
    let omega2 = BilinearMap::from_fn(d2, d1, |a, b| {
        let lowered = Vector::from_fn(d1, |c, _| {
            let r = &data.rho1[c];
            let gr = g2 * r;
            gr[(b, a)] + gr[(a, b)]
        });
        &g1inv * lowered
    });
    Ok((omega1, omega2))
}

/// Residuals of every condition of the block construction, given the two
/// symmetric maps `omega1`, `omega2`.
pub fn data_residuals(data: &LSPKData, om1: &BilinearMap, om2: &BilinearMap) -> Vec<NamedResidual> {
    let (d1, d2) = (data.dim1, data.dim2);
    let g1 = data.metric1.matrix();
    let g2 = data.metric2.matrix();
    let e1 = |a: usize| basis_vector(d1, a);
    let e2 = |a: usize| basis_vector(d2, a);
    let ip1 = |x: &Vector, y: &Vector| (x.transpose() * g1 * y)[(0, 0)];
    let ip2 = |x: &Vector, y: &Vector| (x.transpose() * g2 * y)[(0, 0)];
    let mul = |x: &Vector, y: &Vector| data.circ2_mul(x, y);
    let none1 = d1 == 0;
    let none2 = d2 == 0;
    let mixed = none1 || none2;
    let mut out = Vec::new();

    let max_over = |n: usize, m: usize, l: usize, f: &dyn Fn(usize, usize, usize) -> f64| {
        let mut r = 0.0_f64;
        for a in 0..n {
            for b in 0..m {
                for c in 0..l {
                    let v = f(a, b, c);
                    r = if v.is_nan() { f64::NAN } else { r.max(v) };
                }
            }
        }
        r
    };

    out.push(NamedResidual::new(
        "B1-skew",
        skew_residual(&data.b1, g1),
        none1,
    ));
    out.push(NamedResidual::new(
        "B2-skew",
        skew_residual(&data.b2, g2),
        none2,
    ));

    let tr1 = data
        .rho1
        .iter()
        .fold(0.0_f64, |m, r| m.max(r.trace().abs()));
    out.push(NamedResidual::new("rho1-trace", tr1, mixed));
    let comm1 = max_over(d1, d1, 1, &|a, b, _| {
        commutator(&data.rho1[a], &data.rho1[b]).amax()
    });
    out.push(NamedResidual::new("rho1-commute", comm1, mixed));
    let rep2 = max_over(d2, d2, 1, &|a, b, _| {
        let br = mul(&e2(a), &e2(b)) - mul(&e2(b), &e2(a));
        (data.rho2_of(&br) - commutator(&data.rho2[a], &data.rho2[b])).amax()
    });
    out.push(NamedResidual::new("rho2-rep", rep2, mixed));

    // system on h2
    let s2_hess = match &data.circ2 {
        Some(c) => hessian_residual(c, g2).0,
        None => 0.0,
    };
    out.push(NamedResidual::new("S2-hessian", s2_hess, none2));
    let ass = |x: &Vector, y: &Vector, z: &Vector| mul(&mul(x, y), z) - mul(x, &mul(y, z));
    let s2_curv = max_over(d2, d2, d2, &|a, b, c| {
        let (x, y, z) = (e2(a), e2(b), e2(c));
        let lhs = ass(&x, &y, &z) - ass(&y, &x, &z);
        let rhs = &x * ip2(&y, &z) - &y * ip2(&x, &z);
        (lhs - rhs).amax()
    });
    out.push(NamedResidual::new("S2-curvature", s2_curv, none2));
    let s2_der = max_over(d2, d2, 1, &|a, b, _| {
        let (x, y) = (e2(a), e2(b));
        let lhs = &data.b2 * mul(&x, &y);
        let rhs = mul(&(&data.b2 * &x), &y) + mul(&x, &(&data.b2 * &y));
        (lhs - rhs).amax()
    });
    out.push(NamedResidual::new("S2-derivation", s2_der, none2));
    let s2_tr = max_over(d2, 1, 1, &|a, _, _| {
        let l = data.circ2.as_ref().map_or(0.0, |c| c.left_basis(a).trace());
        (l + data.rho2[a].trace()).abs()
    });
    out.push(NamedResidual::new("S2-trace", s2_tr, none2));

    // system coupling the blocks
    let s31 = max_over(d1, d2, d2, &|a, b, c| {
        let (x, y, z) = (e1(a), e2(b), e2(c));
        let rx = &data.rho1[a];
        let lhs = rx * mul(&y, &z);
        let rhs = mul(&y, &(rx * &z)) + mul(&(rx * &y), &z)
            - data.rho1_of(&(&data.rho2[b] * &x)) * &z
            - om1.eval(&x, om2.get(b, c));
        (lhs - rhs).amax()
    });
    out.push(NamedResidual::new("S3-1", s31, mixed));
    let s32 = max_over(d2, d1, d1, &|a, b, c| {
        let (x, z) = (e2(a), e1(c));
        let r = data.rho2_of(&(&data.rho1[b] * &x)) * &z + om2.eval(&x, om1.get(b, c));
        r.amax()
    });
    out.push(NamedResidual::new("S3-2", s32, mixed));
    let s33 = max_over(d1, d1, d1, &|a, b, c| {
        (&data.rho1[a] * om1.get(b, c) - &data.rho1[b] * om1.get(a, c)).amax()
    });
    out.push(NamedResidual::new("S3-3", s33, mixed));
    let s34 = max_over(d2, d2, d2, &|a, b, c| {
        let (x, y, z) = (e2(a), e2(b), e2(c));
        let br = mul(&x, &y) - mul(&y, &x);
        let r = &data.rho2[a] * om2.get(b, c) - &data.rho2[b] * om2.get(a, c)
            + om2.eval(&x, &mul(&y, &z))
            - om2.eval(&y, &mul(&x, &z))
            - om2.eval(&br, &z);
        r.amax()
    });
    out.push(NamedResidual::new("S3-4", s34, mixed));
    let s35 = max_over(d1, d2, d2, &|a, b, c| {
        let (y, z) = (e2(b), e2(c));
        let rx = &data.rho1[a];
        (om2.eval(&(rx * &y), &z) + om2.eval(&y, &(rx * &z))).amax()
    });
    out.push(NamedResidual::new("S3-5", s35, mixed));
    let s36 = max_over(d2, d1, d1, &|a, b, c| {
        let (x, y, z) = (e2(a), e1(b), e1(c));
        let rx = &data.rho2[a];
        let lhs = mul(&x, om1.get(b, c));
        let rhs = om1.eval(&(rx * &y), &z) + om1.eval(&y, &(rx * &z)) - &x * ip1(&y, &z);
        (lhs - rhs).amax()
    });
    out.push(NamedResidual::new("S3-6", s36, mixed));
    let s37 = max_over(d1, 1, 1, &|a, _, _| {
        let x = e1(a);
        let lhs = commutator(&data.b2, &data.rho1[a]);
        let rhs = data.rho1_of(&(&data.b1 * &x)) + &data.rho1[a] * 0.5;
        (lhs - rhs).amax()
    });
    out.push(NamedResidual::new("S3-7", s37, mixed));
    let s38 = max_over(d2, 1, 1, &|a, _, _| {
        let x = e2(a);
        let lhs = commutator(&data.b1, &data.rho2[a]);
        let rhs = data.rho2_of(&(&data.b2 * &x));
        (lhs - rhs).amax()
    });
    out.push(NamedResidual::new("S3-8", s38, mixed));
    out
}

/// Threshold for quadratic identities in the block data.
pub(crate) fn data_threshold(
    data: &LSPKData,
    om1: &BilinearMap,
    om2: &BilinearMap,
    tol: Tolerance,
) -> f64 {
    let s = data.scale().max(om1.max_abs()).max(om2.max_abs());
    tol.scaled(s * s)
}

/// Worst residual among `residuals` as a report.
pub(crate) fn summarize(residuals: &[NamedResidual], threshold: f64) -> PredicateReport {
    // NaN ranks above every finite residual
    let key = |r: &NamedResidual| {
        if r.value.is_nan() {
            f64::INFINITY
        } else {
            r.value
        }
    };
    let worst = residuals.iter().max_by(|a, b| key(a).total_cmp(&key(b)));
    let (value, name) = worst.map_or((0.0, None), |w| (w.value, Some(w.name.clone())));
    PredicateReport {
        holds: value <= threshold,
        max_residual: value,
        threshold,
        witness: None,
        failing: name,
    }
}

/// Checks every condition of the block construction.
pub fn validate_data(data: &LSPKData, tol: Tolerance) -> PredicateReport {
    let (om1, om2) = match derive_omegas(data) {
        Ok(o) => o,
        Err(_) => {
            return PredicateReport {
                holds: false,
                max_residual: f64::INFINITY,
                threshold: tol.eps(),
                witness: None,
                failing: Some("metric".into()),
            }
        }
    };
    let res = data_residuals(data, &om1, &om2);
    summarize(&res, data_threshold(data, &om1, &om2, tol))
}

/// Assembles the algebra on `h1 + h2 + RH` from valid block data.
pub fn build_lspk(data: &LSPKData, tol: Tolerance) -> Result<AlgebraStructure> {
    let report = validate_data(data, tol);
    if !report.holds {
        return Err(Error::ValidationFailed {
            equation: report.failing.unwrap_or_default(),
            residual: report.max_residual,
        });
    }
    let (om1, om2) = derive_omegas(data)?;
    let a = assemble(data, &om1, &om2)?;
    let rho = data.rho();
    let mut expected = DMatrix::zeros(a.dim(), a.dim());
    let (d1, d2) = (data.dim1, data.dim2);
    expected
        .view_mut((0, 0), (d1, d1))
        .copy_from(&(data.metric1.matrix() * rho));
    expected
        .view_mut((d1, d1), (d2, d2))
        .copy_from(&(data.metric2.matrix() * rho));
    expected[(d1 + d2, d1 + d2)] = rho;
    let residual = (koszul_form(&a).matrix() - expected).amax();
    if residual > tol.scaled(a.scale() * a.scale() * rho) {
        return Err(Error::KoszulMismatch { residual });
    }
    Ok(a)
}

/// The product table of the block construction, without any checks.
pub(crate) fn assemble(
    data: &LSPKData,
    om1: &BilinearMap,
    om2: &BilinearMap,
) -> Result<AlgebraStructure> {
    let (d1, d2) = (data.dim1, data.dim2);
    let n = d1 + d2 + 1;
    let h = n - 1;
    let g1 = data.metric1.matrix();
    let g2 = data.metric2.matrix();
    let mut c = vec![0.0; n * n * n];
    let idx = |i: usize, j: usize, k: usize| (i * n + j) * n + k;
    for a in 0..d1 {
        for b in 0..d1 {
            let w = om1.get(a, b);
            for k in 0..d2 {
                c[idx(a, b, d1 + k)] = w[k];
            }
            c[idx(a, b, h)] = g1[(a, b)];
        }
        // H . e_a = B1 e_a + e_a / 2
        for k in 0..d1 {
            c[idx(h, a, k)] = data.b1[(k, a)] + if k == a { 0.5 } else { 0.0 };
        }
        for b in 0..d2 {
            for k in 0..d2 {
                c[idx(a, d1 + b, d1 + k)] = data.rho1[a][(k, b)];
            }
        }
    }
    for a in 0..d2 {
        for b in 0..d2 {
            let w = om2.get(a, b);
            for k in 0..d1 {
                c[idx(d1 + a, d1 + b, k)] = w[k];
            }
            if let Some(circ) = &data.circ2 {
                for k in 0..d2 {
                    c[idx(d1 + a, d1 + b, d1 + k)] = circ.get(a, b, k);
                }
            }
            c[idx(d1 + a, d1 + b, h)] = g2[(a, b)];
        }
        for b in 0..d1 {
            for k in 0..d1 {
                c[idx(d1 + a, b, k)] = data.rho2[a][(k, b)];
            }
        }
        for k in 0..d2 {
            c[idx(h, d1 + a, d1 + k)] = data.b2[(k, a)] + if k == a { 1.0 } else { 0.0 };
        }
        c[idx(d1 + a, h, d1 + a)] = 1.0;
    }
    c[idx(h, h, h)] = 1.0;
    AlgebraStructure::new(n, c)
}

/// `X.Y = <X,Y> H`, `H.X = X/2 + D X`, `X.H = 0`, `H.H = H` on
/// `R^n + RH` with the Euclidean product. `n = 0` gives `H.H = H`.
pub fn build_corollary1(n: usize, d: &LinearMap, tol: Tolerance) -> Result<AlgebraStructure> {
    shape(d, n, n, "D")?;
    let residual = skew_residual(d, &DMatrix::identity(n, n));
    if residual > tol.scaled(d.amax()) {
        return Err(Error::NotSkew { residual });
    }
    let data = LSPKData::h1_only(BilinearForm::identity(n), d.clone())?;
    Ok(build_lspk(&data, tol)?.with_name("corollary1"))
}

/// `X.Y = X o Y + <X,Y> H`, `H.X = X + D X`, `X.H = X`, `H.H = H` over a
/// Euclidean algebra `(h, o)` with traceless left multiplications, the
/// Hessian identity and `ass(X,Y,Z) - ass(Y,X,Z) = <Y,Z>X - <X,Z>Y`, for a
/// skew derivation `D`.
pub fn build_corollary2(
    h: &MetricAlgebra,
    d: &LinearMap,
    tol: Tolerance,
) -> Result<AlgebraStructure> {
    let alg = h.algebra();
    let g = h.metric().matrix();
    let n = alg.dim();
    shape(d, n, n, "D")?;
    let fail = |name: &str, residual: f64| Error::HypothesisFailed {
        name: name.to_string(),
        residual,
    };
    let thr = tol.scaled(alg.scale());
    let tr = alg.left_traces().amax();
    if tr > thr {
        return Err(fail("trace", tr));
    }
    // k = -1 in the convention ass(X,Y,Z) - ass(Y,X,Z) = k(<X,Z>Y - <Y,Z>X)
    let kh = check_k_hessian(alg, h.metric(), -1.0, tol)?;
    if !kh.holds {
        let name = kh.failing.as_deref().unwrap_or("curvature").to_string();
        return Err(fail(&name, kh.max_residual));
    }
    let skew = skew_residual(d, g);
    if skew > tol.scaled(d.amax() * g.amax()) {
        return Err(fail("skew", skew));
    }
    let mut der = 0.0_f64;
    for a in 0..n {
        for b in 0..n {
            let (x, y) = (basis_vector(n, a), basis_vector(n, b));
            let lhs = d * alg.basis_product(a, b);
            let rhs = alg.multiply(&(d * &x), &y)? + alg.multiply(&x, &(d * &y))?;
            der = der.max((lhs - rhs).amax());
        }
    }
    if der > tol.scaled(alg.scale() * d.amax()) {
        return Err(fail("derivation", der));
    }
    let data = LSPKData::new(
        BilinearForm::identity(0),
        h.metric().clone(),
        Some(alg.clone()),
        LinearMap::zeros(0, 0),
        d.clone(),
        Vec::new(),
        vec![LinearMap::zeros(0, 0); n],
    )?;
    Ok(build_lspk(&data, tol)?.with_name("corollary2"))
}

/// The degenerate case of [`build_corollary2`] with `h = 0`: `H.H = H`.
pub fn build_corollary2_trivial() -> AlgebraStructure {
    AlgebraStructure::new(1, vec![1.0])
        .expect("one-dimensional table")
        .with_name("corollary2")
}

/// A Euclidean space with a distinguished non-zero vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MilnorSpec {
    pub dim: usize,
    pub metric: BilinearForm,
    #[serde(serialize_with = "ser::vector")]
    pub h_vec: Vector,
}

impl MilnorSpec {
    pub fn euclidean(h_vec: Vector) -> Self {
        Self {
            dim: h_vec.len(),
            metric: BilinearForm::identity(h_vec.len()),
            h_vec,
        }
    }

    /// `|h|^2` in the given metric.
    pub fn h_norm_sq(&self) -> f64 {
        self.metric.eval(&self.h_vec, &self.h_vec)
    }
}

/// `X o Y = <X,Y> h - <Y,h> X`; a `-|h|^2`-Hessian algebra.
pub fn build_milnor(spec: &MilnorSpec, tol: Tolerance) -> Result<MetricAlgebra> {
    let n = spec.dim;
    if spec.h_vec.len() != n || spec.metric.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: spec.h_vec.len().max(spec.metric.dim()),
        });
    }
    if spec.h_vec.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroH);
    }
    let g = spec.metric.matrix();
    let gh = g * &spec.h_vec;
    let alg = AlgebraStructure::from_fn(n, |i, j, k| {
        let mut v = g[(i, j)] * spec.h_vec[k];
        if i == k {
            v -= gh[j];
        }
        v
    })?
    .with_name("milnor");
    let m = MetricAlgebra::new(alg, spec.metric.clone(), tol)?;
    let k = -spec.h_norm_sq();
    let lh = m.algebra().left_operator_unchecked(&spec.h_vec).amax();
    // L_h vanishes up to rounding of the two cancelling terms
    if lh > 1e-3 * tol.scaled(m.algebra().scale() * spec.h_vec.amax()) {
        return Err(Error::VerificationFailed(format!("L_h = {lh:e}")));
    }
    let report = check_k_hessian(m.algebra(), m.metric(), k, tol)?;
    if !report.holds {
        return Err(Error::VerificationFailed(format!(
            "k-Hessian residual {:e} at k = {k}",
            report.max_residual
        )));
    }
    Ok(m)
}

/// Recovers `h` from a `k`-Hessian algebra (`k < 0`) admitting a non-zero
/// `u` with `L_u = 0`.
///
/// Kernel candidates are tried in decreasing order of their singular value;
/// for each, both signs of `sqrt(|k|) u / |u|` are tested against the Milnor
/// product.
pub fn recognize_milnor(m: &MetricAlgebra, k: f64, tol: Tolerance) -> Result<Vector> {
    if !(k < 0.0) {
        return Err(Error::PreconditionFailed(format!(
            "k must be negative, got {k}"
        )));
    }
    let alg = m.algebra();
    let report = check_k_hessian(alg, m.metric(), k, tol)?;
    if !report.holds {
        return Err(Error::PreconditionFailed(format!(
            "not {k}-Hessian (residual {:e})",
            report.max_residual
        )));
    }
    let n = alg.dim();
    // column i holds L_{e_i} flattened
    let flat = DMatrix::from_fn(n * n, n, |row, i| alg.get(i, row / n, row % n));
    let thr = tol.scaled(alg.scale());
    let mut kernel = null_space(&flat, tol.eps(), thr);
    if kernel.is_empty() {
        return Err(Error::NoKernelVector);
    }
    kernel.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, u) in &kernel {
        let norm = m.metric().eval(u, u).sqrt();
        let base = u * ((-k).sqrt() / norm);
        for sign in [1.0, -1.0] {
            let h = &base * sign;
            let spec = MilnorSpec {
                dim: n,
                metric: m.metric().clone(),
                h_vec: h.clone(),
            };
            let Ok(candidate) = build_milnor(&spec, tol) else {
                continue;
            };
            if candidate.algebra().max_diff(alg)? <= thr {
                return Ok(h);
            }
        }
    }
    Err(Error::VerificationFailed(
        "no kernel vector reproduces the Milnor product".into(),
    ))
}

/// The two normal forms of two-dimensional `k`-Hessian algebras with
/// traceless left multiplications, in an orthonormal basis.
pub fn kdim2_family(k: f64, theta: f64, family: u8, tol: Tolerance) -> Result<MetricAlgebra> {
    if !(k < 0.0) {
        return Err(Error::ParamOutOfRange {
            name: "k".into(),
            value: k,
        });
    }
    let s = (-k).sqrt();
    let (c, sn) = (theta.cos(), theta.sin());
    let products = match family {
        1 => vec![
            (0, 0, vec![0.0, -s * c]),
            (0, 1, vec![s * c, 0.0]),
            (1, 0, vec![0.0, -s * sn]),
            (1, 1, vec![s * sn, 0.0]),
        ],
        2 => {
            let b = s / std::f64::consts::SQRT_2 * c;
            let y = s / std::f64::consts::SQRT_2 * sn;
            vec![
                (0, 0, vec![-y, b]),
                (0, 1, vec![b, y]),
                (1, 0, vec![b, y]),
                (1, 1, vec![y, -b]),
            ]
        }
        other => {
            return Err(Error::ParamOutOfRange {
                name: "family".into(),
                value: other as f64,
            })
        }
    };
    let alg = AlgebraStructure::from_products(2, &products)?.with_name(format!("kdim2_f{family}"));
    let m = MetricAlgebra::new(alg, BilinearForm::identity(2), tol)?;
    let tr = m.algebra().left_traces().amax();
    let report = check_k_hessian(m.algebra(), m.metric(), k, tol)?;
    if tr > tol.scaled(m.algebra().scale()) || !report.holds {
        return Err(Error::VerificationFailed(format!(
            "family {family}: trace {tr:e}, k-Hessian residual {:e}",
            report.max_residual
        )));
    }
    Ok(m)
}
