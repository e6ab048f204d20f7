//! Splitting an LSPK into the block data of the construction.
//!
//! Pipeline: the idempotent `H` dual to the trace form, the orthogonal
//! complement `h = H^perp` with the operators `S = R_H|h` and `A = L_H|h`,
//! the eigenspaces `h1 = ker S` and `h2 = ker(S - 1)`, and finally the
//! actions, the symmetric maps and the product on `h2`, read off in an
//! orthonormal basis for `<,> = B / rho`. Every identity met on the way is
//! evaluated and kept as a named residual; any residual above threshold
//! aborts with the name of the failing identity.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::algebra::{basis_vector, AlgebraStructure, LinearMap, Tolerance, Vector};
use crate::construction::{
    assemble, data_residuals, derive_omegas, BilinearMap, LSPKData, NamedResidual,
};
use crate::error::{Error, Result};
use crate::forms::{hessian_residual, is_positive_definite, koszul_form, BilinearForm};
use crate::linalg::{commutator, gram_schmidt, inner, ser, symmetric_eigen};

/// Default clustering radius for the spectrum of `S` around `0` and `1`.
pub const CLUSTER_TOL: f64 = 1e-6;

/// Threshold for identities quadratic in the structure constants.
fn quad_threshold(a: &AlgebraStructure, tol: Tolerance) -> f64 {
    tol.scaled(a.scale() * a.scale())
}

/// The vector `H` with `B(X, H) = tr(L_X)`; it satisfies `H.H = H`.
pub fn find_idempotent_h(a: &AlgebraStructure, tol: Tolerance) -> Result<Vector> {
    let b = koszul_form(a);
    let pd = is_positive_definite(&b, tol);
    if !pd.holds {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: -pd.max_residual,
        });
    }
    let t = a.left_traces();
    let h = b
        .matrix()
        .clone()
        .cholesky()
        .ok_or(Error::NotPositiveDefinite {
            min_eigenvalue: 0.0,
        })?
        .solve(&t);
    let hh = a.multiply(&h, &h)?;
    let residual = (hh - &h).amax();
    let scale = a.scale() * h.amax().max(1.0).powi(2);
    if !(residual <= tol.scaled(scale)) {
        return Err(Error::IdempotentCheckFailed { residual });
    }
    Ok(h)
}

/// `h = H^perp` with an orthonormal basis for `B / rho`, and the data living
/// on it. `s`, `a_op` and `circ` are expressed in that basis.
#[derive(Debug, Clone, Serialize)]
pub struct HSplit {
    #[serde(rename = "H", serialize_with = "ser::vector")]
    pub h: Vector,
    pub rho: f64,
    /// Basis of `h` in the coordinates of the input algebra.
    #[serde(serialize_with = "ser::vectors")]
    pub basis: Vec<Vector>,
    #[serde(rename = "S", serialize_with = "ser::matrix")]
    pub s: LinearMap,
    #[serde(rename = "A", serialize_with = "ser::matrix")]
    pub a_op: LinearMap,
    /// Product on `h`; absent when `h = 0`.
    pub circ: Option<AlgebraStructure>,
    pub residuals: Vec<NamedResidual>,
}

impl HSplit {
    /// The scalar product on `h` in its own basis.
    pub fn metric(&self) -> BilinearForm {
        BilinearForm::identity(self.basis.len())
    }
}

fn fail_as(residuals: &[NamedResidual], threshold: f64) -> Result<()> {
    for r in residuals {
        if !(r.value <= threshold) {
            return Err(Error::SystemAsViolated {
                equation: r.name.clone(),
                residual: r.value,
            });
        }
    }
    Ok(())
}

/// Restricts the product to `h` and checks the system relating `o`, `S`
/// and `A`.
pub fn split_h(a: &AlgebraStructure, h: &Vector, tol: Tolerance) -> Result<HSplit> {
    let n = a.dim();
    let b = koszul_form(a);
    let rho = b.eval(h, h);
    if !(rho > 0.0) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: rho,
        });
    }
    let g = b.matrix() / rho;
    let candidates: Vec<Vector> = (0..n)
        .filter_map(|i| {
            let e = basis_vector(n, i);
            let c = b.eval(&e, h) / rho;
            let v = &e - h * c;
            let ratio = (inner(&g, &v, &v) / inner(&g, &e, &e)).max(0.0).sqrt();
            (ratio > 1e-8).then_some(v)
        })
        .collect();
    let basis = gram_schmidt(&candidates, &g, 1e-8);
    let m = n - 1;
    if basis.len() != m {
        return Err(Error::SystemAsViolated {
            equation: "h-dimension".into(),
            residual: (basis.len() as f64 - m as f64).abs(),
        });
    }
    let mut p = LinearMap::zeros(n, n);
    for (c, v) in basis.iter().enumerate() {
        p.set_column(c, v);
    }
    p.set_column(m, h);
    let t = a.change_basis(&p)?;

    // S e_b = e_b . H and A e_b = H . e_b, restricted to h
    let s = LinearMap::from_fn(m, m, |r, c| t.get(c, m, r));
    let a_op = LinearMap::from_fn(m, m, |r, c| t.get(m, c, r));
    let circ = if m > 0 {
        Some(AlgebraStructure::from_fn(m, |i, j, k| t.get(i, j, k))?)
    } else {
        None
    };

    let mut res = Vec::new();
    let idem = (0..n).fold(0.0_f64, |r, k| {
        r.max((t.get(m, m, k) - if k == m { 1.0 } else { 0.0 }).abs())
    });
    res.push(NamedResidual::new("H-idempotent", idem, false));
    let invariant = (0..m).fold(0.0_f64, |r, i| {
        r.max(t.get(m, i, m).abs()).max(t.get(i, m, m).abs())
    });
    res.push(NamedResidual::new("H-invariant", invariant, m == 0));
    let metric_part = (0..m * m).fold(0.0_f64, |r, idx| {
        let (i, j) = (idx / m, idx % m);
        r.max((t.get(i, j, m) - if i == j { 1.0 } else { 0.0 }).abs())
    });
    res.push(NamedResidual::new("product-H", metric_part, m == 0));
    res.extend(as_residuals(circ.as_ref(), &s, &a_op));
    fail_as(&res, quad_threshold(&t, tol))?;

    Ok(HSplit {
        h: h.clone(),
        rho,
        basis,
        s,
        a_op,
        circ,
        residuals: res,
    })
}

fn as_residuals(
    circ: Option<&AlgebraStructure>,
    s: &LinearMap,
    a_op: &LinearMap,
) -> Vec<NamedResidual> {
    let m = s.nrows();
    let vac = m == 0;
    let id = LinearMap::identity(m, m);
    let mut out = vec![
        NamedResidual::new("S-symmetric", (s - s.transpose()).amax(), vac),
        NamedResidual::new("AS-S", (s - (a_op + a_op.transpose() - &id)).amax(), vac),
        NamedResidual::new("AS-SA", (commutator(s, a_op) - (s * s - s)).amax(), vac),
    ];
    let Some(c) = circ else {
        for name in [
            "AS-hessian",
            "AS-curvature",
            "AS-S-bracket",
            "AS-A-derivation",
            "AS-trace",
        ] {
            out.push(NamedResidual::new(name, 0.0, true));
        }
        return out;
    };
    let e = |i: usize| basis_vector(m, i);
    let mul = |x: &Vector, y: &Vector| c.left_operator_unchecked(x) * y;
    let ass = |x: &Vector, y: &Vector, z: &Vector| mul(&mul(x, y), z) - mul(x, &mul(y, z));
    out.push(NamedResidual::new(
        "AS-hessian",
        hessian_residual(c, &id).0,
        false,
    ));
    let mut curv = 0.0_f64;
    let mut sbr = 0.0_f64;
    let mut der = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (e(i), e(j));
            let xy = mul(&x, &y);
            let br = &xy - mul(&y, &x);
            sbr = sbr.max((s * br - (mul(&x, &(s * &y)) - mul(&y, &(s * &x)))).amax());
            let rhs = mul(&(a_op * &x), &y) + mul(&x, &(a_op * &y)) - mul(&(s * &x), &y);
            der = der.max((a_op * &xy - rhs).amax());
            for k in 0..m {
                let z = e(k);
                let lhs = ass(&x, &y, &z) - ass(&y, &x, &z);
                let rhs = s * &x * y.dot(&z) - s * &y * x.dot(&z);
                curv = curv.max((lhs - rhs).amax());
            }
        }
    }
    out.push(NamedResidual::new("AS-curvature", curv, false));
    out.push(NamedResidual::new("AS-S-bracket", sbr, false));
    out.push(NamedResidual::new("AS-A-derivation", der, false));
    let tr = c.left_traces().amax();
    out.push(NamedResidual::new("AS-trace", tr, false));
    out
}

/// Eigenspaces of `S` and the skew blocks of `A`. Vectors are in the
/// coordinates of the orthonormal basis of `h`.
#[derive(Debug, Clone, Serialize)]
pub struct EigenSplit {
    #[serde(serialize_with = "ser::vectors")]
    pub h1: Vec<Vector>,
    #[serde(serialize_with = "ser::vectors")]
    pub h2: Vec<Vector>,
    #[serde(serialize_with = "ser::matrix")]
    pub b1: LinearMap,
    #[serde(serialize_with = "ser::matrix")]
    pub b2: LinearMap,
    pub residuals: Vec<NamedResidual>,
}

/// Orthonormal basis of the span of `v`'s columns, aligned with the
/// coordinate axes: the axes are projected onto the span and re-orthonormalized.
fn aligned_basis(v: &DMatrix<f64>) -> Vec<Vector> {
    let (m, d) = (v.nrows(), v.ncols());
    if d == 0 {
        return Vec::new();
    }
    let proj = v * v.transpose();
    let cands: Vec<Vector> = (0..m).map(|i| proj.column(i).into_owned()).collect();
    let out = gram_schmidt(&cands, &LinearMap::identity(m, m), 1e-6);
    if out.len() == d {
        out
    } else {
        (0..d).map(|c| v.column(c).into_owned()).collect()
    }
}

fn as_columns(vs: &[Vector], m: usize) -> DMatrix<f64> {
    if vs.is_empty() {
        DMatrix::zeros(m, 0)
    } else {
        DMatrix::from_columns(vs)
    }
}

/// `h1 = ker S`, `h2 = ker(S - 1)`, `B1 = A|h1 - 1/2`, `B2 = A|h2 - 1`.
pub fn eigensplit(
    s: &LinearMap,
    a_op: &LinearMap,
    tol: Tolerance,
    cluster_tol: f64,
) -> Result<EigenSplit> {
    let m = s.nrows();
    let (vals, vecs) = symmetric_eigen(s);
    let mut zero = Vec::new();
    let mut one = Vec::new();
    for (i, &l) in vals.iter().enumerate() {
        if l.abs() <= cluster_tol {
            zero.push(vecs.column(i).into_owned());
        } else if (l - 1.0).abs() <= cluster_tol {
            one.push(vecs.column(i).into_owned());
        } else {
            return Err(Error::SpectrumNotZeroOne { eigenvalue: l });
        }
    }
    let h1 = aligned_basis(&as_columns(&zero, m));
    let h2 = aligned_basis(&as_columns(&one, m));
    let w1 = as_columns(&h1, m);
    let w2 = as_columns(&h2, m);
    let (d1, d2) = (h1.len(), h2.len());
    let b1 = w1.transpose() * a_op * &w1 - LinearMap::identity(d1, d1) * 0.5;
    let b2 = w2.transpose() * a_op * &w2 - LinearMap::identity(d2, d2);
    let thr = tol.scaled(a_op.amax());
    for (name, b) in [("B1", &b1), ("B2", &b2)] {
        let residual = (b + b.transpose()).amax();
        if !(residual <= thr) {
            return Err(Error::BlockNotSkew {
                block: name.into(),
                residual,
            });
        }
    }
    let off = (w2.transpose() * a_op * &w1)
        .amax()
        .max((w1.transpose() * a_op * &w2).amax());
    let residuals = vec![
        NamedResidual::new("A-invariant-blocks", off, d1 == 0 || d2 == 0),
        NamedResidual::new("B1-skew", (&b1 + b1.transpose()).amax(), d1 == 0),
        NamedResidual::new("B2-skew", (&b2 + b2.transpose()).amax(), d2 == 0),
    ];
    if !(off <= thr) {
        return Err(Error::SystemAsViolated {
            equation: "A-invariant-blocks".into(),
            residual: off,
        });
    }
    Ok(EigenSplit {
        h1,
        h2,
        b1,
        b2,
        residuals,
    })
}

/// The complete block data of an LSPK.
#[derive(Debug, Clone, Serialize)]
pub struct LSPKDecomposition {
    #[serde(rename = "H", serialize_with = "ser::vector")]
    pub h: Vector,
    pub rho: f64,
    pub dim_h1: usize,
    pub dim_h2: usize,
    /// Basis of `h1` in the coordinates of the input algebra.
    #[serde(serialize_with = "ser::vectors")]
    pub basis_h1: Vec<Vector>,
    #[serde(serialize_with = "ser::vectors")]
    pub basis_h2: Vec<Vector>,
    #[serde(rename = "B1", serialize_with = "ser::matrix")]
    pub b1: LinearMap,
    #[serde(rename = "B2", serialize_with = "ser::matrix")]
    pub b2: LinearMap,
    /// `S` and `A` on `h`, in the orthonormal basis built by [`split_h`].
    #[serde(rename = "S", serialize_with = "ser::matrix")]
    pub s: LinearMap,
    #[serde(rename = "A", serialize_with = "ser::matrix")]
    pub a_op: LinearMap,
    #[serde(serialize_with = "ser::matrices")]
    pub rho1: Vec<LinearMap>,
    #[serde(serialize_with = "ser::matrices")]
    pub rho2: Vec<LinearMap>,
    pub omega1: BilinearMap,
    pub omega2: BilinearMap,
    pub circ2: Option<AlgebraStructure>,
    pub residuals: Vec<NamedResidual>,
}

impl LSPKDecomposition {
    /// `(dim h1, dim h2, rho)`.
    pub fn signature(&self) -> (usize, usize, f64) {
        (self.dim_h1, self.dim_h2, self.rho)
    }

    /// Columns `(h1 basis, h2 basis, H)` in input coordinates.
    pub fn basis_matrix(&self) -> LinearMap {
        let cols: Vec<Vector> = self
            .basis_h1
            .iter()
            .chain(&self.basis_h2)
            .chain(std::iter::once(&self.h))
            .cloned()
            .collect();
        DMatrix::from_columns(&cols)
    }

    /// Block data with Euclidean scalar products on `h1`, `h2`.
    pub fn to_lspk_data(&self) -> LSPKData {
        LSPKData {
            dim1: self.dim_h1,
            dim2: self.dim_h2,
            metric1: BilinearForm::identity(self.dim_h1),
            metric2: BilinearForm::identity(self.dim_h2),
            circ2: self.circ2.clone(),
            b1: self.b1.clone(),
            b2: self.b2.clone(),
            rho1: self.rho1.clone(),
            rho2: self.rho2.clone(),
        }
    }

    /// Largest residual that is not vacuous.
    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .filter(|r| !r.vacuous)
            .fold(0.0_f64, |m, r| {
                if r.value.is_nan() {
                    f64::NAN
                } else {
                    m.max(r.value)
                }
            })
    }
}

/// Reads the block data in the basis `(h1, h2, H)` and verifies it.
pub fn extract_structure(
    a: &AlgebraStructure,
    split: &HSplit,
    eig: &EigenSplit,
    tol: Tolerance,
) -> Result<LSPKDecomposition> {
    let n = a.dim();
    let m = n - 1;
    let (d1, d2) = (eig.h1.len(), eig.h2.len());
    let u = as_columns(&split.basis, n);
    let lift = |w: &Vector| &u * w;
    let basis_h1: Vec<Vector> = eig.h1.iter().map(lift).collect();
    let basis_h2: Vec<Vector> = eig.h2.iter().map(lift).collect();
    let mut p = LinearMap::zeros(n, n);
    for (c, v) in basis_h1.iter().chain(&basis_h2).enumerate() {
        p.set_column(c, v);
    }
    p.set_column(m, &split.h);
    let t = a.change_basis(&p)?;
    let thr = quad_threshold(&t, tol);

    let circ1 = (0..d1 * d1 * d1).fold(0.0_f64, |r, idx| {
        let (i, j, k) = (idx / (d1 * d1), (idx / d1) % d1, idx % d1);
        r.max(t.get(i, j, k).abs())
    });
    if !(circ1 <= thr) {
        return Err(Error::Circ1NonZero { residual: circ1 });
    }

    let omega1 = BilinearMap::from_fn(d1, d2, |i, j| {
        Vector::from_fn(d2, |k, _| t.get(i, j, d1 + k))
    });
    let omega2 = BilinearMap::from_fn(d2, d1, |i, j| {
        Vector::from_fn(d1, |k, _| t.get(d1 + i, d1 + j, k))
    });
    let circ2 = if d2 > 0 {
        Some(AlgebraStructure::from_fn(d2, |i, j, k| {
            t.get(d1 + i, d1 + j, d1 + k)
        })?)
    } else {
        None
    };
    let rho1: Vec<LinearMap> = (0..d1)
        .map(|i| LinearMap::from_fn(d2, d2, |k, j| t.get(i, d1 + j, d1 + k)))
        .collect();
    let rho2: Vec<LinearMap> = (0..d2)
        .map(|i| LinearMap::from_fn(d1, d1, |k, j| t.get(d1 + i, j, k)))
        .collect();
    let data = LSPKData::new(
        BilinearForm::identity(d1),
        BilinearForm::identity(d2),
        circ2.clone(),
        eig.b1.clone(),
        eig.b2.clone(),
        rho1.clone(),
        rho2.clone(),
    )?;

    let mixed = d1 == 0 || d2 == 0;
    let mut res = Vec::new();
    res.extend(split.residuals.iter().cloned());
    res.extend(eig.residuals.iter().cloned());
    res.push(NamedResidual::new("circ1-zero", circ1, d1 == 0));
    let (om1, om2) = derive_omegas(&data)?;
    res.push(NamedResidual::new("S1-1", om1.max_diff(&omega1), mixed));
    res.push(NamedResidual::new("S1-2", om2.max_diff(&omega2), mixed));
    res.extend(
        data_residuals(&data, &omega1, &omega2)
            .into_iter()
            .filter(|r| !r.name.ends_with("-skew")),
    );
    let block = assemble(&data, &omega1, &omega2)?.max_diff(&t)?;
    res.push(NamedResidual::new("block-form", block, false));
    let rho = split.rho;
    let koszul = (koszul_form(&t).matrix() - DMatrix::identity(n, n) * rho).amax();
    res.push(NamedResidual::new("koszul-block", koszul, false));
    let rho_formula = (rho - data.rho()).abs();
    res.push(NamedResidual::new("rho-formula", rho_formula, false));

    for r in &res {
        let limit = if r.name == "koszul-block" || r.name == "rho-formula" {
            tol.scaled(rho * t.scale() * t.scale())
        } else {
            thr
        };
        if !(r.value <= limit) {
            return Err(Error::SystemViolated {
                name: r.name.clone(),
                residual: r.value,
            });
        }
    }

    Ok(LSPKDecomposition {
        h: split.h.clone(),
        rho,
        dim_h1: d1,
        dim_h2: d2,
        basis_h1,
        basis_h2,
        b1: eig.b1.clone(),
        b2: eig.b2.clone(),
        s: split.s.clone(),
        a_op: split.a_op.clone(),
        rho1,
        rho2,
        omega1,
        omega2,
        circ2,
        residuals: res,
    })
}

/// Full pipeline from a raw LSPK.
pub fn decompose(a: &AlgebraStructure, tol: Tolerance) -> Result<LSPKDecomposition> {
    let h = find_idempotent_h(a, tol)?;
    let split = split_h(a, &h, tol)?;
    let eig = eigensplit(&split.s, &split.a_op, tol, CLUSTER_TOL)?;
    extract_structure(a, &split, &eig, tol)
}
