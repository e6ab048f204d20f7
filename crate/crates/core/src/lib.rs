//! Left-symmetric algebras with positive definite Koszul form.
//!
//! Algebras are given by structure constants. The crate checks the defining
//! identities, splits an LSPK into its block data and rebuilds it, builds the
//! Milnor and two-dimensional k-Hessian families, and computes the Ricci
//! curvature of the Kähler metric on the tangent bundle.

// residual checks are written `!(r <= thr)` so that NaN fails
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod catalog;
pub mod construction;
pub mod decomposition;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod linalg;
pub mod search;

pub use algebra::{basis_vector, AlgebraStructure, LinearMap, Side, Tolerance, Vector};
pub use catalog::{CatalogEntry, Fixture, Params};
pub use construction::{BilinearMap, LSPKData, MilnorSpec, NamedResidual};
pub use decomposition::LSPKDecomposition;
pub use error::{Error, Result};
pub use forms::{BilinearForm, PredicateReport};
pub use geometry::{CurvatureReport, MetricAlgebra};
pub use search::{PolySystem, RootSet};
