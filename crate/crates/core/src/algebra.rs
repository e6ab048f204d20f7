//! Structure-constant representation of finite-dimensional real algebras.
//!
//! An algebra of dimension `n` is stored as a dense `n x n x n` tensor `C`
//! with `e_i . e_j = sum_k C[i][j][k] e_k`. Linear maps are matrices acting
//! on coordinate columns, so column `j` of a map holds the image of `e_j`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Coordinates of an element in the algebra basis.
pub type Vector = DVector<f64>;

/// Endomorphism matrix; column `j` is the image of the `j`-th basis vector.
pub type LinearMap = DMatrix<f64>;

/// Residual bound used by every predicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Self { eps })
        } else {
            Err(Error::PreconditionFailed(format!(
                "tolerance must be positive, got {eps}"
            )))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `eps * max(1, scale)`.
    pub fn scaled(&self, scale: f64) -> f64 {
        self.eps * scale.abs().max(1.0)
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            eps: Self::DEFAULT_EPS,
        }
    }
}

/// A finite-dimensional real algebra given by its structure constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraStructure {
    dim: usize,
    constants: Vec<f64>,
    name: Option<String>,
}

impl AlgebraStructure {
    /// Builds an algebra from a flat tensor laid out as `[i][j][k]`.
    pub fn new(dim: usize, constants: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidConstants(
                "dimension must be at least 1".into(),
            ));
        }
        if constants.len() != dim * dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim * dim,
                got: constants.len(),
            });
        }
        if let Some(pos) = constants.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidConstants(format!(
                "non-finite entry at flat index {pos}"
            )));
        }
        Ok(Self {
            dim,
            constants,
            name: None,
        })
    }

    /// The algebra with every product zero.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, vec![0.0; dim * dim * dim])
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        let mut constants = Vec::with_capacity(dim * dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    constants.push(f(i, j, k));
                }
            }
        }
        Self::new(dim, constants)
    }

    /// Builds an algebra from a list of non-zero products `e_i . e_j = coeffs`.
    /// Pairs that are absent are zero; repeated pairs are summed.
    pub fn from_products(dim: usize, products: &[(usize, usize, Vec<f64>)]) -> Result<Self> {
        let mut constants = vec![0.0; dim * dim * dim];
        for (i, j, coeffs) in products {
            if *i >= dim || *j >= dim {
                return Err(Error::InvalidConstants(format!(
                    "product index ({i}, {j}) out of range for dimension {dim}"
                )));
            }
            if coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: coeffs.len(),
                });
            }
            for (k, c) in coeffs.iter().enumerate() {
                constants[(i * dim + j) * dim + k] += c;
            }
        }
        Self::new(dim, constants)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn constants(&self) -> &[f64] {
        &self.constants
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Largest absolute structure constant.
    pub fn max_abs(&self) -> f64 {
        self.constants.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Scale used for residual thresholds: `max(1, max |C|)`.
    pub fn scale(&self) -> f64 {
        self.max_abs().max(1.0)
    }

    /// Coordinates of `e_i . e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> Vector {
        let start = (i * self.dim + j) * self.dim;
        Vector::from_column_slice(&self.constants[start..start + self.dim])
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() == self.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.len(),
            })
        }
    }

    /// `x . y = sum_ij x_i y_j C[i][j][.]`.
    pub fn multiply(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.left_operator_unchecked(x) * y)
    }

    /// Matrix of `y -> x . y` (left) or `y -> y . x` (right).
    pub fn mult_operator(&self, x: &Vector, side: Side) -> Result<LinearMap> {
        self.check_len(x)?;
        Ok(match side {
            Side::Left => self.left_operator_unchecked(x),
            Side::Right => self.right_operator_unchecked(x),
        })
    }

    pub(crate) fn left_operator_unchecked(&self, x: &Vector) -> LinearMap {
        let n = self.dim;
        let mut m = LinearMap::zeros(n, n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += xi * self.get(i, j, k);
                }
            }
        }
        m
    }

    pub(crate) fn right_operator_unchecked(&self, x: &Vector) -> LinearMap {
        let n = self.dim;
        let mut m = LinearMap::zeros(n, n);
        for i in 0..n {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..n {
                for k in 0..n {
                    m[(k, j)] += xi * self.get(j, i, k);
                }
            }
        }
        m
    }

    /// Left multiplication by the basis vector `e_i`.
    pub fn left_basis(&self, i: usize) -> LinearMap {
        let n = self.dim;
        LinearMap::from_fn(n, n, |k, j| self.get(i, j, k))
    }

    /// Right multiplication by the basis vector `e_i`.
    pub fn right_basis(&self, i: usize) -> LinearMap {
        let n = self.dim;
        LinearMap::from_fn(n, n, |k, j| self.get(j, i, k))
    }

    /// `tr(L_{e_i})` for every basis vector.
    pub fn left_traces(&self) -> Vector {
        let n = self.dim;
        Vector::from_fn(n, |i, _| (0..n).map(|j| self.get(i, j, j)).sum())
    }

    /// `(x . y) . z - x . (y . z)`.
    pub fn associator(&self, x: &Vector, y: &Vector, z: &Vector) -> Result<Vector> {
        let xy = self.multiply(x, y)?;
        let yz = self.multiply(y, z)?;
        Ok(self.multiply(&xy, z)? - self.multiply(x, &yz)?)
    }

    /// Associator on basis vectors, computed straight from the tensor.
    pub fn basis_associator(&self, i: usize, j: usize, k: usize) -> Vector {
        let n = self.dim;
        let mut out = Vector::zeros(n);
        for m in 0..n {
            let cij = self.get(i, j, m);
            let cjk = self.get(j, k, m);
            for l in 0..n {
                out[l] += cij * self.get(m, k, l) - cjk * self.get(i, m, l);
            }
        }
        out
    }

    /// Commutator algebra: `C'[i][j][k] = C[i][j][k] - C[j][i][k]`.
    pub fn lie_bracket_constants(&self) -> AlgebraStructure {
        let n = self.dim;
        let constants = (0..n * n * n)
            .map(|idx| {
                let (i, j, k) = (idx / (n * n), (idx / n) % n, idx % n);
                self.get(i, j, k) - self.get(j, i, k)
            })
            .collect();
        AlgebraStructure {
            dim: n,
            constants,
            name: self.name.as_ref().map(|s| format!("[{s}]")),
        }
    }

    /// Structure constants in the basis `f_j = sum_i P[i][j] e_i`.
    pub fn change_basis(&self, p: &LinearMap) -> Result<AlgebraStructure> {
        let n = self.dim;
        if p.nrows() != n || p.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.nrows().max(p.ncols()),
            });
        }
        let det = p.determinant();
        let tol = Tolerance::default();
        if !(det.abs() > tol.eps()) {
            return Err(Error::SingularMatrix { det });
        }
        let q = p
            .clone()
            .try_inverse()
            .ok_or(Error::SingularMatrix { det })?;
        // products of the new basis vectors in old coordinates, then re-expressed
        let mut constants = vec![0.0; n * n * n];
        let cols: Vec<Vector> = (0..n).map(|a| p.column(a).into_owned()).collect();
        for a in 0..n {
            let la = self.left_operator_unchecked(&cols[a]);
            for b in 0..n {
                let prod = q.clone() * (&la * &cols[b]);
                for c in 0..n {
                    constants[(a * n + b) * n + c] = prod[c];
                }
            }
        }
        let mut out = AlgebraStructure::new(n, constants)?;
        out.name = self.name.clone();
        Ok(out)
    }

    /// Max-norm distance between two tensors of equal dimension.
    pub fn max_diff(&self, other: &AlgebraStructure) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(self
            .constants
            .iter()
            .zip(&other.constants)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }
}

impl Serialize for AlgebraStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AlgebraStructure", 3)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("constants", &self.constants)?;
        st.end()
    }
}

/// Which side a multiplication operator acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// The `i`-th standard basis vector of length `n`.
pub fn basis_vector(n: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(n);
    v[i] = 1.0;
    v
}
