//! JSON interchange format for algebras and construction data.
//!
//! ```json
//! {"name": "lspk_dim2", "dim": 2,
//!  "products": [{"i": 0, "j": 0, "coeffs": [0, 1]}, ...],
//!  "metric": [[1, 0], [0, 1]], "tolerance": 1e-9}
//! ```
//!
//! `products` lists `e_i . e_j`; absent pairs are zero. `metric` and
//! `tolerance` are optional.

use lspk_core::linalg::{matrix_from_rows, rows_of};
use lspk_core::{AlgebraStructure, BilinearForm, LSPKData, LinearMap};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in {field}: {reason}")]
    Schema { field: String, reason: String },
}

fn schema(field: impl Into<String>, reason: impl Into<String>) -> FileError {
    FileError::Schema {
        field: field.into(),
        reason: reason.into(),
    }
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, FileError> {
    serde_json::from_str(text).map_err(|e| {
        if e.is_data() {
            // serde reports missing fields and type mismatches as data errors
            schema("document", e.to_string())
        } else {
            FileError::Parse {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            }
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Product {
    pub i: usize,
    pub j: usize,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraFile {
    #[serde(default)]
    pub name: String,
    pub dim: usize,
    #[serde(default)]
    pub products: Vec<Product>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// A parsed algebra file.
#[derive(Debug, Clone)]
pub struct LoadedAlgebra {
    pub name: String,
    pub algebra: AlgebraStructure,
    pub metric: Option<BilinearForm>,
    pub tolerance: Option<f64>,
}

fn products_to_constants(
    field: &str,
    dim: usize,
    products: &[Product],
) -> Result<AlgebraStructure, FileError> {
    let mut seen = vec![false; dim * dim];
    let mut table = Vec::with_capacity(products.len());
    for (idx, p) in products.iter().enumerate() {
        let f = format!("{field}[{idx}]");
        if p.i >= dim || p.j >= dim {
            return Err(schema(
                f,
                format!("index ({}, {}) out of range for dim {dim}", p.i, p.j),
            ));
        }
        if p.coeffs.len() != dim {
            return Err(schema(
                f + ".coeffs",
                format!("length {} != dim {dim}", p.coeffs.len()),
            ));
        }
        if seen[p.i * dim + p.j] {
            return Err(schema(f, format!("duplicate product ({}, {})", p.i, p.j)));
        }
        seen[p.i * dim + p.j] = true;
        table.push((p.i, p.j, p.coeffs.clone()));
    }
    AlgebraStructure::from_products(dim, &table).map_err(|e| schema(field, e.to_string()))
}

fn constants_to_products(a: &AlgebraStructure) -> Vec<Product> {
    let n = a.dim();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let coeffs: Vec<f64> = (0..n).map(|k| a.get(i, j, k)).collect();
            if coeffs.iter().any(|&c| c != 0.0) {
                out.push(Product { i, j, coeffs });
            }
        }
    }
    out
}

fn matrix_field(
    field: &str,
    rows: &[Vec<f64>],
    r: usize,
    c: usize,
) -> Result<LinearMap, FileError> {
    let m = if rows.is_empty() && r * c == 0 {
        LinearMap::zeros(r, c)
    } else {
        matrix_from_rows(rows).map_err(|e| schema(field, e.to_string()))?
    };
    if m.nrows() != r || m.ncols() != c {
        return Err(schema(
            field,
            format!("expected {r}x{c}, got {}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(m)
}

fn symmetric_field(field: &str, rows: &[Vec<f64>], n: usize) -> Result<BilinearForm, FileError> {
    let m = matrix_field(field, rows, n, n)?;
    let asym = (&m - m.transpose()).amax();
    if asym > 1e-12 * m.amax().max(1.0) {
        return Err(schema(field, format!("not symmetric (asymmetry {asym:e})")));
    }
    BilinearForm::new(m).map_err(|e| schema(field, e.to_string()))
}

impl AlgebraFile {
    pub fn from_algebra(a: &AlgebraStructure, metric: Option<&BilinearForm>) -> Self {
        AlgebraFile {
            name: a.name().unwrap_or_default().to_string(),
            dim: a.dim(),
            products: constants_to_products(a),
            metric: metric.map(|g| rows_of(g.matrix())),
            tolerance: None,
        }
    }

    pub fn load(&self) -> Result<LoadedAlgebra, FileError> {
        if self.dim == 0 {
            return Err(schema("dim", "must be positive"));
        }
        let mut algebra = products_to_constants("products", self.dim, &self.products)?;
        if !self.name.is_empty() {
            algebra = algebra.with_name(self.name.clone());
        }
        let metric = match &self.metric {
            Some(rows) => Some(symmetric_field("metric", rows, self.dim)?),
            None => None,
        };
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(schema("tolerance", "must be positive and finite"));
            }
        }
        Ok(LoadedAlgebra {
            name: self.name.clone(),
            algebra,
            metric,
            tolerance: self.tolerance,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("algebra files always serialize")
    }
}

pub fn parse_algebra_file(text: &str) -> Result<LoadedAlgebra, FileError> {
    parse_json::<AlgebraFile>(text)?.load()
}

/// Block data for `build theo`. Omitted maps are zero and omitted metrics
/// are Euclidean.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataFile {
    pub dim1: usize,
    pub dim2: usize,
    #[serde(default)]
    pub metric1: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub metric2: Option<Vec<Vec<f64>>>,
    /// Product on `h2`, as in [`AlgebraFile::products`].
    #[serde(default)]
    pub circ2: Vec<Product>,
    #[serde(default)]
    pub b1: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub b2: Option<Vec<Vec<f64>>>,
    /// `rho1(e_a)` for each basis vector of `h1`.
    #[serde(default)]
    pub rho1: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default)]
    pub rho2: Option<Vec<Vec<Vec<f64>>>>,
}

fn metric_or_identity(
    field: &str,
    rows: &Option<Vec<Vec<f64>>>,
    n: usize,
) -> Result<BilinearForm, FileError> {
    match rows {
        Some(r) => symmetric_field(field, r, n),
        None => Ok(BilinearForm::identity(n)),
    }
}

fn map_or_zero(
    field: &str,
    rows: &Option<Vec<Vec<f64>>>,
    n: usize,
) -> Result<LinearMap, FileError> {
    match rows {
        Some(r) => matrix_field(field, r, n, n),
        None => Ok(LinearMap::zeros(n, n)),
    }
}

fn maps_or_zero(
    field: &str,
    maps: &Option<Vec<Vec<Vec<f64>>>>,
    count: usize,
    n: usize,
) -> Result<Vec<LinearMap>, FileError> {
    match maps {
        None => Ok(vec![LinearMap::zeros(n, n); count]),
        Some(ms) => {
            if ms.len() != count {
                return Err(schema(
                    field,
                    format!("expected {count} matrices, got {}", ms.len()),
                ));
            }
            ms.iter()
                .enumerate()
                .map(|(i, m)| matrix_field(&format!("{field}[{i}]"), m, n, n))
                .collect()
        }
    }
}

impl DataFile {
    pub fn from_data(d: &LSPKData) -> Self {
        let opt = |m: &LinearMap| (m.nrows() > 0).then(|| rows_of(m));
        let maps = |v: &[LinearMap]| (!v.is_empty()).then(|| v.iter().map(rows_of).collect());
        DataFile {
            dim1: d.dim1,
            dim2: d.dim2,
            metric1: opt(d.metric1.matrix()),
            metric2: opt(d.metric2.matrix()),
            circ2: d
                .circ2
                .as_ref()
                .map(constants_to_products)
                .unwrap_or_default(),
            b1: opt(&d.b1),
            b2: opt(&d.b2),
            rho1: maps(&d.rho1),
            rho2: maps(&d.rho2),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("data file serializes")
    }

    pub fn load(&self) -> Result<LSPKData, FileError> {
        let (d1, d2) = (self.dim1, self.dim2);
        let circ2 = if d2 > 0 {
            Some(products_to_constants("circ2", d2, &self.circ2)?)
        } else if !self.circ2.is_empty() {
            return Err(schema("circ2", "given but dim2 = 0"));
        } else {
            None
        };
        LSPKData::new(
            metric_or_identity("metric1", &self.metric1, d1)?,
            metric_or_identity("metric2", &self.metric2, d2)?,
            circ2,
            map_or_zero("b1", &self.b1, d1)?,
            map_or_zero("b2", &self.b2, d2)?,
            maps_or_zero("rho1", &self.rho1, d1, d2)?,
            maps_or_zero("rho2", &self.rho2, d2, d1)?,
        )
        .map_err(|e| schema("data", e.to_string()))
    }
}

pub fn parse_data_file(text: &str) -> Result<LSPKData, FileError> {
    parse_json::<DataFile>(text)?.load()
}

/// A matrix given inline on the command line as JSON rows.
pub fn parse_matrix_arg(field: &str, text: &str, n: usize) -> Result<LinearMap, FileError> {
    let rows: Vec<Vec<f64>> = parse_json(text)?;
    matrix_field(field, &rows, n, n)
}
