#![allow(dead_code)]

use lspk_core::catalog::{catalog, EntryKind};
use lspk_core::{AlgebraStructure, CatalogEntry, LinearMap, Params};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize, amp: f64) -> LinearMap {
    LinearMap::from_fn(r, c, |_, _| rng.gen_range(-amp..amp))
}

pub fn random_skew(rng: &mut ChaCha8Rng, n: usize, amp: f64) -> LinearMap {
    let m = random_matrix(rng, n, n, amp);
    (&m - m.transpose()) * 0.5
}

pub fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> LinearMap {
    random_matrix(rng, n, n, 1.0).qr().q()
}

/// Well conditioned: identity plus a small perturbation, then an orthogonal factor.
pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> LinearMap {
    let q = random_orthogonal(rng, n);
    (LinearMap::identity(n, n) + random_matrix(rng, n, n, 0.3)) * q
}

pub fn sample_params(entry: &CatalogEntry, rng: &mut ChaCha8Rng) -> Params {
    entry
        .params
        .iter()
        .map(|p| (p.name.to_string(), p.at(rng.gen::<f64>())))
        .collect()
}

pub fn lspk_entries() -> Vec<&'static CatalogEntry> {
    catalog()
        .iter()
        .filter(|e| e.kind == EntryKind::Lspk)
        .collect()
}

/// Every LSPK entry at its defaults plus `extra` random parameter samples.
pub fn lspk_samples(seed: u64, extra: usize) -> Vec<(String, Params, AlgebraStructure)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for e in lspk_entries() {
        let mut ps = vec![e.defaults()];
        if !e.params.is_empty() {
            ps.extend((0..extra).map(|_| sample_params(e, &mut r)));
        }
        for p in ps {
            let a = e.build(&p).expect("sampled params are in range").algebra;
            out.push((e.name.to_string(), p, a));
        }
    }
    out
}
