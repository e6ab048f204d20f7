//! Small dense linear-algebra kernels shared by the other modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::algebra::{LinearMap, Vector};
use crate::error::{Error, Result};

/// Eigen-decomposition of a symmetric matrix, eigenvalues sorted ascending.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let n = sym.nrows();
    if n == 0 {
        return (DVector::zeros(0), DMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Inner product `x^T G y`.
#[inline]
pub fn inner(g: &DMatrix<f64>, x: &Vector, y: &Vector) -> f64 {
    (x.transpose() * g * y)[(0, 0)]
}

/// Gram-Schmidt against the metric `g` with a second re-orthogonalization pass.
///
/// Vectors whose residual norm falls below `drop_tol` times their original
/// norm are discarded, so the output spans the same space as the input.
pub fn gram_schmidt(candidates: &[Vector], g: &DMatrix<f64>, drop_tol: f64) -> Vec<Vector> {
    let mut basis: Vec<Vector> = Vec::new();
    for c in candidates {
        let norm0 = inner(g, c, c).max(0.0).sqrt();
        if norm0 == 0.0 {
            continue;
        }
        let mut v = c.clone();
        for _pass in 0..2 {
            for b in &basis {
                let coeff = inner(g, b, &v);
                v -= b * coeff;
            }
        }
        let norm = inner(g, &v, &v).max(0.0).sqrt();
        if norm > drop_tol * norm0 {
            basis.push(v / norm);
        }
    }
    basis
}

/// Orthonormal basis (Euclidean) of the column space, with singular values
/// below `rel_tol * sigma_max` treated as zero.
pub fn column_space(m: &DMatrix<f64>, rel_tol: f64, abs_floor: f64) -> Vec<Vector> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let smax = svd.singular_values.max();
    if smax <= abs_floor {
        return Vec::new();
    }
    let cut = rel_tol * smax;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > cut)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Right null space of `m`: vectors `v` with `m v ~ 0`, paired with their
/// singular values, smallest first.
pub fn null_space(m: &DMatrix<f64>, rel_tol: f64, abs_floor: f64) -> Vec<(f64, Vector)> {
    let n = m.ncols();
    if n == 0 {
        return Vec::new();
    }
    // pad so the SVD returns a full V for wide and tall matrices alike
    let rows = m.nrows().max(n);
    let mut padded = DMatrix::zeros(rows, n);
    padded.view_mut((0, 0), (m.nrows(), n)).copy_from(m);
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.max();
    let cut = (rel_tol * smax).max(abs_floor);
    let mut out: Vec<(f64, Vector)> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= cut)
        .map(|(i, &s)| (s, v_t.row(i).transpose().into_owned()))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Columns of `L^{-T}` where `g = L L^T`: a `g`-orthonormal frame.
pub fn orthonormal_frame(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = g.clone().cholesky().ok_or(Error::SingularMetric)?;
    let l = chol.l();
    let linv = l.try_inverse().ok_or(Error::SingularMetric)?;
    Ok(linv.transpose())
}

pub fn commutator(a: &LinearMap, b: &LinearMap) -> LinearMap {
    a * b - b * a
}

/// Max-norm of `G M + M^T G`, zero exactly when `M` is `G`-skew.
pub fn skew_residual(m: &LinearMap, g: &DMatrix<f64>) -> f64 {
    let s = g * m + m.transpose() * g;
    s.amax()
}

/// Max-norm of `G M - M^T G`, zero exactly when `M` is `G`-symmetric.
pub fn symmetric_residual(m: &LinearMap, g: &DMatrix<f64>) -> f64 {
    let s = g * m - m.transpose() * g;
    s.amax()
}

pub fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::InvalidConstants("ragged matrix".into()));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

/// Serde adapters writing matrices as nested row arrays.
pub(crate) mod ser {
    use nalgebra::DMatrix;
    use serde::ser::{SerializeSeq, Serializer};
    use serde::Serialize;

    use crate::algebra::Vector;

    struct Rows<'a>(&'a DMatrix<f64>);

    impl Serialize for Rows<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            super::rows_of(self.0).serialize(s)
        }
    }

    pub fn matrix<S: Serializer>(m: &DMatrix<f64>, s: S) -> Result<S::Ok, S::Error> {
        Rows(m).serialize(s)
    }

    pub fn matrices<S: Serializer>(ms: &[DMatrix<f64>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(ms.len()))?;
        for m in ms {
            seq.serialize_element(&Rows(m))?;
        }
        seq.end()
    }

    pub fn vector<S: Serializer>(v: &Vector, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter())
    }

    pub fn vectors<S: Serializer>(vs: &[Vector], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(vs.iter().map(|v| v.as_slice()))
    }
}
