mod common;

use proptest::prelude::*;
use rand::Rng;
use roe_core::linalg::{band_nearness, norm, op_norm, singular_values, svd, BandOptions};
use roe_core::{CMatrix, C64};

use common::{gaussian, rng};

fn random_matrix(seed: u64, rows: usize, cols: usize) -> CMatrix {
    let mut g = rng(seed);
    CMatrix::from_fn(rows, cols, |_, _| gaussian(&mut g))
}

/// Largest eigenvalue of the 2x2 Hermitian `A^*A`, in closed form.
fn norm_2x2(a: &CMatrix) -> f64 {
    let g = a.adjoint().matmul(a).unwrap();
    let (p, q, s) = (g[(0, 0)].re, g[(1, 1)].re, g[(0, 1)].norm());
    let mean = 0.5 * (p + q);
    let disc = (0.25 * (p - q) * (p - q) + s * s).sqrt();
    (mean + disc).sqrt()
}

proptest! {
    #![proptest_config(common::config(48))]

    #[test]
    fn two_by_two_norm_matches_closed_form(seed in any::<u64>()) {
        let a = random_matrix(seed, 2, 2);
        let want = norm_2x2(&a);
        prop_assert!((norm(&a) - want).abs() <= 1e-12 * want.max(1.0));
    }

    #[test]
    fn adjoint_has_the_same_norm(seed in any::<u64>(), rows in 1usize..40, cols in 1usize..40) {
        let a = random_matrix(seed, rows, cols);
        let tol = 1e-10;
        let x = op_norm(&a, tol).value;
        let y = op_norm(&a.adjoint(), tol).value;
        prop_assert!((x - y).abs() <= 2.0 * tol * x.max(1.0), "{x} vs {y}");
    }

    #[test]
    fn submatrices_do_not_grow_the_norm(seed in any::<u64>(), rows in 2usize..20, cols in 2usize..20) {
        let a = random_matrix(seed, rows, cols);
        let mut g = rng(seed.wrapping_add(1));
        let r: Vec<usize> = (0..rows).filter(|_| g.random_bool(0.5)).collect();
        let c: Vec<usize> = (0..cols).filter(|_| g.random_bool(0.5)).collect();
        let sub = a.select(&r, &c);
        prop_assert!(norm(&sub) <= norm(&a) + 2e-10);
    }

    #[test]
    fn svd_reconstructs(seed in any::<u64>(), rows in 1usize..12, cols in 1usize..12) {
        let a = random_matrix(seed, rows, cols);
        let d = svd(&a);
        let k = d.s.len();
        let us = CMatrix::from_fn(rows, k, |i, j| d.u[(i, j)] * d.s[j]);
        let back = us.matmul(&d.v.adjoint()).unwrap();
        prop_assert!(back.max_abs_diff(&a) <= 1e-10);
        prop_assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn band_nearness_sits_below_truncation(seed in any::<u64>(), n in 2usize..10) {
        let a = random_matrix(seed, n, n);
        let pattern: Vec<bool> = (0..n * n).map(|k| (k / n).abs_diff(k % n) <= 1).collect();
        let trunc = CMatrix::from_fn(n, n, |i, j| {
            if i.abs_diff(j) <= 1 { C64::new(0.0, 0.0) } else { a[(i, j)] }
        });
        let res = band_nearness(&a, &pattern, BandOptions::default()).unwrap();
        prop_assert!(res.dist <= norm(&trunc) + 1e-12);
        // the returned S is supported on the pattern and realises dist
        for (k, &keep) in pattern.iter().enumerate() {
            if !keep {
                prop_assert_eq!(res.s[(k / n, k % n)], C64::new(0.0, 0.0));
            }
        }
        let gap = norm(&a.sub(&res.s).unwrap());
        prop_assert!((gap - res.dist).abs() <= 1e-9 * gap.max(1.0));
    }
}

#[test]
fn power_path_agrees_with_jacobi_on_large_matrices() {
    for seed in 0..6 {
        let a = random_matrix(seed, 80, 70);
        let est = op_norm(&a, 1e-12);
        let exact = singular_values(&a).0[0];
        assert!((est.value - exact).abs() <= 1e-8 * exact, "{} vs {exact}", est.value);
    }
}

#[test]
fn band_distance_shrinks_as_the_pattern_grows() {
    for seed in 0..20 {
        let n = 7;
        let a = random_matrix(seed, n, n);
        let mut prev = f64::INFINITY;
        for w in 0..n {
            let pattern: Vec<bool> = (0..n * n).map(|k| (k / n).abs_diff(k % n) <= w).collect();
            let opts = BandOptions {
                iters: 2000,
                ..BandOptions::default()
            };
            let d = band_nearness(&a, &pattern, opts).unwrap().dist;
            assert!(d <= prev + 1e-6 * norm(&a), "seed {seed} width {w}: {d} > {prev}");
            prev = d;
        }
        assert!(prev <= 1e-12);
    }
}
