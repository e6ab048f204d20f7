//! Named fixtures: the LSPKs of dimension at most five, the `k`-Hessian
//! examples, Milnor algebras and the nilpotent algebra with vanishing Koszul
//! form. Each entry knows its Koszul matrix and decomposition signature, and
//! [`catalog_verify`] checks them.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{AlgebraStructure, LinearMap, Tolerance, Vector};
use crate::construction::{build_milnor, kdim2_family, MilnorSpec};
use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::forms::{
    check_associative, check_commutative, check_hessian, check_k_hessian, check_koszul_identity,
    check_left_symmetric, check_novikov, is_positive_definite, is_solvable, koszul_form,
    BilinearForm, PredicateReport,
};
use crate::geometry::MetricAlgebra;

pub type Params = BTreeMap<String, f64>;

fn surd(radicand: u32) -> f64 {
    f64::from(radicand).sqrt()
}

/// Range and default of a real parameter. Non-empty `choices` restrict the
/// value to a finite set.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
    pub default: f64,
    pub integer: bool,
    pub choices: &'static [f64],
}

const fn real(name: &'static str, lo: f64, hi: f64, default: f64) -> ParamSpec {
    ParamSpec {
        name,
        lo,
        hi,
        default,
        integer: false,
        choices: &[],
    }
}

const fn int(name: &'static str, lo: f64, hi: f64, default: f64) -> ParamSpec {
    ParamSpec {
        name,
        lo,
        hi,
        default,
        integer: true,
        choices: &[],
    }
}

const fn choice(name: &'static str, choices: &'static [f64], default: f64) -> ParamSpec {
    ParamSpec {
        name,
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
        default,
        integer: false,
        choices,
    }
}

impl ParamSpec {
    pub fn admits(&self, v: f64) -> bool {
        if !v.is_finite() {
            return false;
        }
        if !self.choices.is_empty() {
            return self.choices.contains(&v);
        }
        (!self.integer || v.fract() == 0.0) && self.lo <= v && v <= self.hi
    }

    /// Maps `u` in `[0, 1)` to a value in range; handy for sampling.
    pub fn at(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        if !self.choices.is_empty() {
            let i = ((u * self.choices.len() as f64) as usize).min(self.choices.len() - 1);
            return self.choices[i];
        }
        if self.integer {
            let span = self.hi - self.lo + 1.0;
            return (self.lo + (u * span).floor()).min(self.hi);
        }
        self.lo + u * (self.hi - self.lo)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EntryKind {
    Lspk,
    KHessian,
    Nilpotent,
}

/// Built fixture; `metric` is present for `k`-Hessian entries.
#[derive(Debug, Clone, Serialize)]
pub struct Fixture {
    pub algebra: AlgebraStructure,
    pub metric: Option<BilinearForm>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExpectedKoszul {
    /// `rho * I`.
    Multiple(f64),
    Zero,
    Unspecified,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expected {
    pub koszul: ExpectedKoszul,
    pub signature: Option<(usize, usize, f64)>,
    pub k: Option<f64>,
}

type Builder = fn(&Params) -> Result<Fixture>;
type Expecter = fn(&Params) -> Expected;

#[derive(Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub kind: EntryKind,
    pub params: &'static [ParamSpec],
    builder: Builder,
    expecter: Expecter,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("params", &self.params)
            .finish()
    }
}

impl CatalogEntry {
    /// Fills defaults and range-checks the supplied values.
    pub fn resolve(&self, params: &Params) -> Result<Params> {
        for key in params.keys() {
            if !self.params.iter().any(|p| p.name == key) {
                return Err(Error::ParamOutOfRange {
                    name: key.clone(),
                    value: params[key],
                });
            }
        }
        let mut out = Params::new();
        for p in self.params {
            let v = params.get(p.name).copied().unwrap_or(p.default);
            if !p.admits(v) {
                return Err(Error::ParamOutOfRange {
                    name: p.name.into(),
                    value: v,
                });
            }
            out.insert(p.name.into(), v);
        }
        Ok(out)
    }

    pub fn defaults(&self) -> Params {
        self.params
            .iter()
            .map(|p| (p.name.to_string(), p.default))
            .collect()
    }

    pub fn build(&self, params: &Params) -> Result<Fixture> {
        let p = self.resolve(params)?;
        let mut f = (self.builder)(&p)?;
        f.algebra = f.algebra.with_name(self.name);
        Ok(f)
    }

    pub fn expected(&self, params: &Params) -> Result<Expected> {
        Ok((self.expecter)(&self.resolve(params)?))
    }
}

fn lspk(a: AlgebraStructure) -> Result<Fixture> {
    Ok(Fixture {
        algebra: a,
        metric: None,
    })
}

fn lspk_expect(rho: f64, sig: (usize, usize)) -> Expected {
    Expected {
        koszul: ExpectedKoszul::Multiple(rho),
        signature: Some((sig.0, sig.1, rho)),
        k: None,
    }
}

fn metric_fixture(m: MetricAlgebra) -> Fixture {
    Fixture {
        metric: Some(m.metric().clone()),
        algebra: m.algebra().clone(),
    }
}

fn build_rn(p: &Params) -> Result<Fixture> {
    let n = p["n"] as usize;
    lspk(AlgebraStructure::from_fn(n, |i, j, k| {
        if i == j && j == k {
            1.0
        } else {
            0.0
        }
    })?)
}

fn build_dim2(_: &Params) -> Result<Fixture> {
    lspk(AlgebraStructure::from_products(
        2,
        &[
            (0, 0, vec![0.0, 1.0]),
            (1, 0, vec![0.5, 0.0]),
            (1, 1, vec![0.0, 1.0]),
        ],
    )?)
}

fn build_case1(p: &Params) -> Result<Fixture> {
    let l = p["lambda"];
    lspk(AlgebraStructure::from_products(
        3,
        &[
            (0, 0, vec![0.0, 0.0, 1.0]),
            (1, 1, vec![0.0, 0.0, 1.0]),
            (2, 0, vec![0.5, l, 0.0]),
            (2, 1, vec![-l, 0.5, 0.0]),
            (2, 2, vec![0.0, 0.0, 1.0]),
        ],
    )?)
}

fn build_case2(p: &Params) -> Result<Fixture> {
    let (s, c) = p["theta"].sin_cos();
    lspk(AlgebraStructure::from_products(
        3,
        &[
            (0, 0, vec![0.0, -c, 1.0]),
            (0, 1, vec![c, 0.0, 0.0]),
            (1, 0, vec![0.0, -s, 0.0]),
            (1, 1, vec![s, 0.0, 1.0]),
            (2, 0, vec![1.0, 0.0, 0.0]),
            (0, 2, vec![1.0, 0.0, 0.0]),
            (2, 1, vec![0.0, 1.0, 0.0]),
            (1, 2, vec![0.0, 1.0, 0.0]),
            (2, 2, vec![0.0, 0.0, 1.0]),
        ],
    )?)
}

fn build_case3(p: &Params) -> Result<Fixture> {
    let a = p["sign"] / surd(6);
    lspk(AlgebraStructure::from_products(
        3,
        &[
            (0, 0, vec![0.0, -2.0 * a, 1.0]),
            (1, 0, vec![-a, 0.0, 0.0]),
            (1, 1, vec![0.0, a, 1.0]),
            (2, 0, vec![0.5, 0.0, 0.0]),
            (2, 1, vec![0.0, 1.0, 0.0]),
            (1, 2, vec![0.0, 1.0, 0.0]),
            (2, 2, vec![0.0, 0.0, 1.0]),
        ],
    )?)
}

/// The dimension-4 solution `8 alpha^2 = 1`, basis `(e1, e2, f, H)`.
pub fn dim4_algebra(alpha: f64, beta: f64, lambda: f64) -> Result<AlgebraStructure> {
    let a = alpha;
    AlgebraStructure::from_products(
        4,
        &[
            (0, 0, vec![0.0, 0.0, 2.0 * a, 1.0]),
            (1, 1, vec![0.0, 0.0, 2.0 * a, 1.0]),
            (2, 2, vec![0.0, 0.0, -2.0 * a, 1.0]),
            (2, 0, vec![a, -beta, 0.0, 0.0]),
            (2, 1, vec![beta, a, 0.0, 0.0]),
            (3, 0, vec![0.5, -lambda, 0.0, 0.0]),
            (3, 1, vec![lambda, 0.5, 0.0, 0.0]),
            (3, 2, vec![0.0, 0.0, 1.0, 0.0]),
            (2, 3, vec![0.0, 0.0, 1.0, 0.0]),
            (3, 3, vec![0.0, 0.0, 0.0, 1.0]),
        ],
    )
}

/// The dimension-5 solutions, basis `(e1, e2, e3, f, H)`.
pub fn dim5_algebra(alpha: f64, gamma: f64, beta: f64, lambda: f64) -> Result<AlgebraStructure> {
    let (a, g) = (alpha, gamma);
    AlgebraStructure::from_products(
        5,
        &[
            (0, 0, vec![0.0, 0.0, 0.0, 2.0 * a, 1.0]),
            (1, 1, vec![0.0, 0.0, 0.0, 2.0 * a, 1.0]),
            (2, 2, vec![0.0, 0.0, 0.0, 2.0 * g, 1.0]),
            (3, 3, vec![0.0, 0.0, 0.0, -(2.0 * a + g), 1.0]),
            (3, 0, vec![a, -beta, 0.0, 0.0, 0.0]),
            (3, 1, vec![beta, a, 0.0, 0.0, 0.0]),
            (3, 2, vec![0.0, 0.0, g, 0.0, 0.0]),
            (4, 0, vec![0.5, -lambda, 0.0, 0.0, 0.0]),
            (4, 1, vec![lambda, 0.5, 0.0, 0.0, 0.0]),
            (4, 2, vec![0.0, 0.0, 0.5, 0.0, 0.0]),
            (4, 3, vec![0.0, 0.0, 0.0, 1.0, 0.0]),
            (3, 4, vec![0.0, 0.0, 0.0, 1.0, 0.0]),
            (4, 4, vec![0.0, 0.0, 0.0, 0.0, 1.0]),
        ],
    )
}

/// `(alpha, gamma)` for the four dimension-5 branches.
pub fn dim5_branch(branch: usize) -> Result<(f64, f64)> {
    let r3 = surd(3);
    let r10 = surd(10);
    match branch {
        0 => Ok((-r3 / 4.0, 1.0 / r3)),
        1 => Ok((r3 / 4.0, -1.0 / r3)),
        2 => Ok((1.0 / r10, 1.0 / r10)),
        3 => Ok((-1.0 / r10, -1.0 / r10)),
        b => Err(Error::ParamOutOfRange {
            name: "branch".into(),
            value: b as f64,
        }),
    }
}

fn build_dim4(p: &Params) -> Result<Fixture> {
    let alpha = p["alpha_sign"] / (2.0 * surd(2));
    lspk(dim4_algebra(alpha, p["beta"], p["lambda"])?)
}

fn build_dim5(p: &Params) -> Result<Fixture> {
    let (alpha, gamma) = dim5_branch(p["branch"] as usize)?;
    lspk(dim5_algebra(alpha, gamma, p["beta"], p["lambda"])?)
}

fn build_kdim2(p: &Params, family: u8) -> Result<Fixture> {
    Ok(metric_fixture(kdim2_family(
        p["k"],
        p["theta"],
        family,
        Tolerance::default(),
    )?))
}

/// Two-dimensional example with `k > 0` allowed.
pub fn r2_example(lambda: f64, y: f64, k: f64) -> Result<(AlgebraStructure, BilinearForm)> {
    let mu = (y * y / 4.0 - 1.0) / k;
    if !(lambda > 0.0) {
        return Err(Error::ParamOutOfRange {
            name: "lambda".into(),
            value: lambda,
        });
    }
    if !(mu > 0.0) || !(k * y.abs() > 2.0) {
        return Err(Error::ParamOutOfRange {
            name: "y".into(),
            value: y,
        });
    }
    let a = AlgebraStructure::from_products(
        2,
        &[
            (0, 0, vec![0.0, (y + 2.0) * lambda / (2.0 * mu)]),
            (1, 1, vec![0.0, y]),
            (0, 1, vec![y / 2.0 - 1.0, 0.0]),
            (1, 0, vec![y / 2.0, 0.0]),
        ],
    )?;
    let g = BilinearForm::new(LinearMap::from_diagonal(&Vector::from_vec(vec![
        lambda, mu,
    ])))?;
    Ok((a, g))
}

fn build_r2_example(p: &Params) -> Result<Fixture> {
    let (a, g) = r2_example(p["lambda"], p["y"], p["k"])?;
    Ok(Fixture {
        algebra: a,
        metric: Some(g),
    })
}

/// Symmetric product on `R^3` with `e1 o e2 = e3`, `e1 o e3 = e2` and
/// `e2 o e3 = c`.
pub fn r3_commutative_with(c: &Vector) -> Result<AlgebraStructure> {
    let e = |i: usize| Vector::from_fn(3, |r, _| if r == i { 1.0 } else { 0.0 });
    AlgebraStructure::from_products(
        3,
        &[
            (0, 1, e(2).as_slice().to_vec()),
            (1, 0, e(2).as_slice().to_vec()),
            (0, 2, e(1).as_slice().to_vec()),
            (2, 0, e(1).as_slice().to_vec()),
            (1, 2, c.as_slice().to_vec()),
            (2, 1, c.as_slice().to_vec()),
        ],
    )
}

/// All values of `e2 o e3` in `{0, +-e1, +-e2, +-e3}` for which
/// [`r3_commutative_with`] is `-1`-Hessian for the canonical metric.
pub fn r3_commutative_completions(tol: Tolerance) -> Result<Vec<Vector>> {
    let mut cands = vec![Vector::zeros(3)];
    for i in 0..3 {
        for s in [1.0, -1.0] {
            cands.push(Vector::from_fn(3, |r, _| if r == i { s } else { 0.0 }));
        }
    }
    let mut out = Vec::new();
    for c in cands {
        let a = r3_commutative_with(&c)?;
        if check_k_hessian(&a, &BilinearForm::identity(3), -1.0, tol)?.holds {
            out.push(c);
        }
    }
    Ok(out)
}

fn build_r3_commutative(_: &Params) -> Result<Fixture> {
    // the printed table repeats the e1 o e3 line; the completion below is the
    // only one in {0, +-e_i} passing the -1-Hessian check
    let e1 = Vector::from_vec(vec![1.0, 0.0, 0.0]);
    Ok(Fixture {
        algebra: r3_commutative_with(&e1)?,
        metric: Some(BilinearForm::identity(3)),
    })
}

fn milnor_spec(p: &Params) -> MilnorSpec {
    let n = p["n"] as usize;
    let h = Vector::from_fn(n, |i, _| p[MILNOR_H[i]]);
    MilnorSpec::euclidean(h)
}

const MILNOR_H: [&str; 6] = ["h1", "h2", "h3", "h4", "h5", "h6"];

fn build_milnor_entry(p: &Params) -> Result<Fixture> {
    Ok(metric_fixture(build_milnor(
        &milnor_spec(p),
        Tolerance::default(),
    )?))
}

fn build_a0(_: &Params) -> Result<Fixture> {
    Ok(Fixture {
        algebra: AlgebraStructure::from_products(2, &[(0, 0, vec![0.0, 1.0])])?,
        metric: None,
    })
}

const KDIM2_PARAMS: &[ParamSpec] = &[
    real("k", -10.0, -0.01, -1.0),
    real("theta", 0.0, std::f64::consts::TAU, 0.0),
];

const SIGNS: &[f64] = &[-1.0, 1.0];

static ENTRIES: [CatalogEntry; 13] = [
    CatalogEntry {
        name: "rn_canonical",
        summary: "R^n with the canonical product e_i e_i = e_i",
        kind: EntryKind::Lspk,
        params: &[int("n", 1.0, 8.0, 3.0)],
        builder: build_rn,
        expecter: |p| {
            let n = p["n"] as usize;
            Expected {
                koszul: ExpectedKoszul::Multiple(1.0),
                signature: Some((0, n - 1, n as f64)),
                k: None,
            }
        },
    },
    CatalogEntry {
        name: "lspk_dim2",
        summary: "the two-dimensional LSPK",
        kind: EntryKind::Lspk,
        params: &[],
        builder: build_dim2,
        expecter: |_| lspk_expect(1.5, (1, 0)),
    },
    CatalogEntry {
        name: "lspk_dim3_case1",
        summary: "dim 3, h = h1, rotation block lambda",
        kind: EntryKind::Lspk,
        params: &[real("lambda", -5.0, 5.0, 1.0)],
        builder: build_case1,
        expecter: |_| lspk_expect(2.0, (2, 0)),
    },
    CatalogEntry {
        name: "lspk_dim3_case2",
        summary: "dim 3, h = h2, angle theta",
        kind: EntryKind::Lspk,
        params: &[real("theta", 0.0, std::f64::consts::TAU, 0.0)],
        builder: build_case2,
        expecter: |_| lspk_expect(3.0, (0, 2)),
    },
    CatalogEntry {
        name: "lspk_dim3_case3",
        summary: "dim 3, dim h1 = dim h2 = 1, a = sign / sqrt 6",
        kind: EntryKind::Lspk,
        params: &[choice("sign", SIGNS, 1.0)],
        builder: build_case3,
        expecter: |_| lspk_expect(2.5, (1, 1)),
    },
    CatalogEntry {
        name: "lspk_dim4",
        summary: "dim 4, alpha = sign / (2 sqrt 2)",
        kind: EntryKind::Lspk,
        params: &[
            choice("alpha_sign", SIGNS, 1.0),
            real("beta", -5.0, 5.0, 0.7),
            real("lambda", -5.0, 5.0, 1.3),
        ],
        builder: build_dim4,
        expecter: |_| lspk_expect(3.0, (2, 1)),
    },
    CatalogEntry {
        name: "lspk_dim5",
        summary: "dim 5, four (alpha, gamma) branches",
        kind: EntryKind::Lspk,
        params: &[
            choice("branch", &[0.0, 1.0, 2.0, 3.0], 2.0),
            real("beta", -5.0, 5.0, 0.0),
            real("lambda", -5.0, 5.0, 1.0),
        ],
        builder: build_dim5,
        expecter: |_| lspk_expect(3.5, (3, 1)),
    },
    CatalogEntry {
        name: "khess_kdim2_f1",
        summary: "traceless 2-dim k-Hessian algebra, first normal form",
        kind: EntryKind::KHessian,
        params: KDIM2_PARAMS,
        builder: |p| build_kdim2(p, 1),
        expecter: |p| Expected {
            koszul: ExpectedKoszul::Unspecified,
            signature: None,
            k: Some(p["k"]),
        },
    },
    CatalogEntry {
        name: "khess_kdim2_f2",
        summary: "traceless 2-dim k-Hessian algebra, second normal form",
        kind: EntryKind::KHessian,
        params: KDIM2_PARAMS,
        builder: |p| build_kdim2(p, 2),
        expecter: |p| Expected {
            koszul: ExpectedKoszul::Unspecified,
            signature: None,
            k: Some(p["k"]),
        },
    },
    CatalogEntry {
        name: "khess_r2_example",
        summary: "2-dim k-Hessian algebra with metric diag(lambda, mu)",
        kind: EntryKind::KHessian,
        params: &[
            real("lambda", 0.01, 10.0, 1.0),
            real("y", -10.0, 10.0, 3.0),
            real("k", -10.0, 10.0, 2.0),
        ],
        builder: build_r2_example,
        expecter: |p| Expected {
            koszul: ExpectedKoszul::Unspecified,
            signature: None,
            k: Some(p["k"]),
        },
    },
    CatalogEntry {
        name: "khess_r3_commutative",
        summary: "commutative -1-Hessian algebra on R^3",
        kind: EntryKind::KHessian,
        params: &[],
        builder: build_r3_commutative,
        expecter: |_| Expected {
            koszul: ExpectedKoszul::Unspecified,
            signature: None,
            k: Some(-1.0),
        },
    },
    CatalogEntry {
        name: "milnor",
        summary: "Milnor algebra X o Y = <X,Y> h - <Y,h> X on R^n",
        kind: EntryKind::KHessian,
        params: &[
            int("n", 2.0, 6.0, 3.0),
            real("h1", -3.0, 3.0, 1.0),
            real("h2", -3.0, 3.0, 0.0),
            real("h3", -3.0, 3.0, 0.0),
            real("h4", -3.0, 3.0, 0.0),
            real("h5", -3.0, 3.0, 0.0),
            real("h6", -3.0, 3.0, 0.0),
        ],
        builder: build_milnor_entry,
        expecter: |p| Expected {
            koszul: ExpectedKoszul::Unspecified,
            signature: None,
            k: Some(-milnor_spec(p).h_norm_sq()),
        },
    },
    CatalogEntry {
        name: "nilpotent_A0",
        summary: "e1 e1 = e2; left-symmetric with zero Koszul form",
        kind: EntryKind::Nilpotent,
        params: &[],
        builder: build_a0,
        expecter: |_| Expected {
            koszul: ExpectedKoszul::Zero,
            signature: None,
            k: None,
        },
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    &ENTRIES
}

pub fn catalog_list() -> Vec<&'static str> {
    ENTRIES.iter().map(|e| e.name).collect()
}

pub fn catalog_entry(name: &str) -> Result<&'static CatalogEntry> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.into()))
}

pub fn catalog_build(name: &str, params: &Params) -> Result<Fixture> {
    catalog_entry(name)?.build(params)
}

/// LSPK entries with default parameters.
pub fn lspk_fixtures() -> Vec<AlgebraStructure> {
    ENTRIES
        .iter()
        .filter(|e| e.kind == EntryKind::Lspk)
        .map(|e| {
            e.build(&Params::new())
                .expect("catalog defaults are valid")
                .algebra
        })
        .collect()
}

/// The Lie algebra `sl(2, R)` as bracket constants in the basis `(e, f, h)`.
pub fn sl2_bracket() -> AlgebraStructure {
    AlgebraStructure::from_products(
        3,
        &[
            (0, 1, vec![0.0, 0.0, 1.0]),
            (1, 0, vec![0.0, 0.0, -1.0]),
            (2, 0, vec![2.0, 0.0, 0.0]),
            (0, 2, vec![-2.0, 0.0, 0.0]),
            (2, 1, vec![0.0, -2.0, 0.0]),
            (1, 2, vec![0.0, 2.0, 0.0]),
        ],
    )
    .expect("sl2 table is well formed")
    .with_name("sl2")
}

fn bool_report(ok: bool) -> PredicateReport {
    PredicateReport::from_residual(if ok { 0.0 } else { 1.0 }, 0.5, None)
}

/// Runs the predicate suite declared by the entry.
pub fn catalog_verify(name: &str, params: &Params, tol: Tolerance) -> Result<PredicateReport> {
    let entry = catalog_entry(name)?;
    let fixture = entry.build(params)?;
    let expected = entry.expected(params)?;
    let a = &fixture.algebra;
    let n = a.dim();
    let sq = tol.scaled(a.scale() * a.scale());

    let mut checks: Vec<(&str, PredicateReport)> = Vec::new();
    if entry.kind != EntryKind::KHessian {
        checks.push(("left-symmetric", check_left_symmetric(a, tol)));
    }
    let b = koszul_form(a);
    match expected.koszul {
        ExpectedKoszul::Multiple(rho) => {
            let diff = (b.matrix() - LinearMap::identity(n, n) * rho).amax();
            checks.push((
                "koszul-matrix",
                PredicateReport::from_residual(diff, sq, None),
            ));
        }
        ExpectedKoszul::Zero => {
            checks.push((
                "koszul-matrix",
                PredicateReport::from_residual(b.matrix().amax(), sq, None),
            ));
        }
        ExpectedKoszul::Unspecified => {}
    }
    if entry.kind == EntryKind::Lspk {
        checks.push(("koszul-identity", check_koszul_identity(a, tol)));
        checks.push(("positive-definite", is_positive_definite(&b, tol)));
        checks.push(("hessian", check_hessian(a, &b, tol)?));
        checks.push((
            "solvable",
            bool_report(is_solvable(&a.lie_bracket_constants(), tol)?),
        ));
    }
    if entry.kind == EntryKind::Nilpotent {
        checks.push(("koszul-identity", check_koszul_identity(a, tol)));
    }
    if entry.name == "rn_canonical" {
        checks.push(("novikov", check_novikov(a, tol)));
        checks.push(("commutative", check_commutative(a, tol)));
        checks.push(("associative", check_associative(a, tol)));
    }
    if let Some((d1, d2, rho)) = expected.signature {
        let report = match decompose(a, tol) {
            Ok(d) => {
                let dims = if (d.dim_h1, d.dim_h2) == (d1, d2) {
                    0.0
                } else {
                    f64::INFINITY
                };
                PredicateReport::from_residual(dims.max((d.rho - rho).abs()), tol.scaled(rho), None)
            }
            Err(_) => bool_report(false),
        };
        checks.push(("signature", report));
    }
    if let (Some(k), Some(g)) = (expected.k, fixture.metric.as_ref()) {
        checks.push(("k-hessian", check_k_hessian(a, g, k, tol)?));
        if entry.name.starts_with("khess_kdim2") || entry.name == "milnor" {
            let tr = a.left_traces().amax();
            checks.push((
                "traceless",
                PredicateReport::from_residual(tr, tol.scaled(a.scale()), None),
            ));
        }
        if entry.name == "khess_r3_commutative" {
            checks.push(("commutative", check_commutative(a, tol)));
        }
    }

    let mut total: Option<PredicateReport> = None;
    for (pred, report) in checks {
        if !report.holds {
            return Err(Error::FixtureBroken {
                name: name.into(),
                predicate: pred.into(),
            });
        }
        total = Some(match total {
            None => report.named(pred),
            Some(t) => t.and(report.named(pred)),
        });
    }
    Ok(total.unwrap_or_else(|| bool_report(true)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn params(kv: &[(&str, f64)]) -> Params {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn inventory() {
        let names = catalog_list();
        assert!(names.len() >= 13);
        assert!(names.contains(&"lspk_dim5"));
        assert!(names.contains(&"rn_canonical"));
    }

    #[test]
    fn every_entry_verifies_at_defaults() {
        for name in catalog_list() {
            let r = catalog_verify(name, &Params::new(), tol());
            assert!(r.is_ok(), "{name}: {r:?}");
        }
    }

    #[test]
    fn every_dim5_branch_verifies() {
        for b in 0..4 {
            let p = params(&[("branch", b as f64), ("beta", 0.3), ("lambda", -1.1)]);
            catalog_verify("lspk_dim5", &p, tol()).unwrap();
        }
    }

    #[test]
    fn dim4_example() {
        let p = params(&[("alpha_sign", 1.0), ("beta", 0.7), ("lambda", 1.3)]);
        catalog_verify("lspk_dim4", &p, tol()).unwrap();
        let a = catalog_build("lspk_dim4", &p).unwrap().algebra;
        let b = koszul_form(&a);
        assert!((b.matrix() - LinearMap::identity(4, 4) * 3.0).amax() < 1e-12);
    }

    #[test]
    fn r2_example_values() {
        let (_, g) = r2_example(1.0, 3.0, 2.0).unwrap();
        assert!((g.matrix()[(1, 1)] - (9.0 / 4.0 - 1.0) / 2.0).abs() < 1e-15);
        let p = params(&[("lambda", 1.0), ("y", 3.0), ("k", 2.0)]);
        catalog_verify("khess_r2_example", &p, tol()).unwrap();
        assert!(matches!(
            r2_example(1.0, 1.0, 2.0),
            Err(Error::ParamOutOfRange { .. })
        ));
    }

    #[test]
    fn r3_completion_is_unique() {
        let found = r3_commutative_completions(tol()).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn param_errors() {
        let r = catalog_verify("lspk_dim3_case3", &params(&[("sign", 0.5)]), tol());
        assert!(matches!(r, Err(Error::ParamOutOfRange { .. })));
        let r = catalog_verify("lspk_dim2", &params(&[("bogus", 1.0)]), tol());
        assert!(matches!(r, Err(Error::ParamOutOfRange { .. })));
        assert!(matches!(
            catalog_verify("nope", &Params::new(), tol()),
            Err(Error::UnknownEntry(_))
        ));
    }

    #[test]
    fn sl2_not_solvable() {
        assert!(!is_solvable(&sl2_bracket(), tol()).unwrap());
    }

    #[test]
    fn surds_are_exact_to_rounding() {
        assert!((surd(6) * surd(6) - 6.0).abs() < 1e-14);
        let (a, g) = dim5_branch(0).unwrap();
        assert!((8.0 * a * a + 2.0 * a * g - 1.0).abs() < 1e-15);
        assert!((6.0 * g * g + 4.0 * a * g - 1.0).abs() < 1e-15);
    }
}
