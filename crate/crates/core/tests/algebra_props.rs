mod common;

use common::{random_invertible, random_matrix, rng};
use lspk_core::{AlgebraStructure, Side, Vector};
use proptest::prelude::*;

fn random_algebra(seed: u64, n: usize) -> AlgebraStructure {
    let mut r = rng(seed);
    let c = random_matrix(&mut r, n * n * n, 1, 2.0);
    AlgebraStructure::new(n, c.as_slice().to_vec()).unwrap()
}

fn random_vector(seed: u64, n: usize) -> Vector {
    let mut r = rng(seed);
    random_matrix(&mut r, n, 1, 3.0).column(0).into_owned()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiply_is_bilinear(seed in any::<u64>(), n in 1usize..6, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let alg = random_algebra(seed, n);
        let (x, x2, y) = (random_vector(seed ^ 1, n), random_vector(seed ^ 2, n), random_vector(seed ^ 3, n));
        let lhs = alg.multiply(&(&x * a + &x2 * b), &y).unwrap();
        let rhs = alg.multiply(&x, &y).unwrap() * a + alg.multiply(&x2, &y).unwrap() * b;
        prop_assert!((lhs - rhs).amax() <= 1e-12);
        let lhs = alg.multiply(&y, &(&x * a + &x2 * b)).unwrap();
        let rhs = alg.multiply(&y, &x).unwrap() * a + alg.multiply(&y, &x2).unwrap() * b;
        prop_assert!((lhs - rhs).amax() <= 1e-12);
    }

    #[test]
    fn left_operator_matches_multiply(seed in any::<u64>(), n in 1usize..6) {
        let alg = random_algebra(seed, n);
        let (x, y) = (random_vector(seed ^ 5, n), random_vector(seed ^ 6, n));
        let l = alg.mult_operator(&x, Side::Left).unwrap();
        prop_assert_eq!(l * &y, alg.multiply(&x, &y).unwrap());
        let r = alg.mult_operator(&y, Side::Right).unwrap();
        prop_assert!((r * &x - alg.multiply(&x, &y).unwrap()).amax() <= 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric(seed in any::<u64>(), n in 1usize..6) {
        let br = random_algebra(seed, n).lie_bracket_constants();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    prop_assert_eq!(br.get(i, j, k), -br.get(j, i, k));
                }
            }
        }
    }

    #[test]
    fn change_basis_round_trip(seed in any::<u64>(), n in 1usize..6) {
        let alg = random_algebra(seed, n);
        let mut r = rng(seed ^ 7);
        let p = random_invertible(&mut r, n);
        let back = alg.change_basis(&p).unwrap().change_basis(&p.clone().try_inverse().unwrap()).unwrap();
        prop_assert!(alg.max_diff(&back).unwrap() <= 10.0 * 1e-9 * alg.scale());
    }
}

#[test]
fn change_basis_by_permutation_permutes_constants() {
    let alg = random_algebra(11, 3);
    let p =
        lspk_core::LinearMap::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
    // f_j = e_{sigma(j)} with sigma = (1, 2, 0)
    let sigma = [1usize, 2, 0];
    let t = alg.change_basis(&p).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                assert!((t.get(i, j, k) - alg.get(sigma[i], sigma[j], sigma[k])).abs() < 1e-14);
            }
        }
    }
}
