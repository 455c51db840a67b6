#![allow(dead_code)]

use std::sync::Arc;

use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use roe_core::{CMatrix, ExtMetricSpace, GeometricModule, ModuleOperator, C64};

/// Fixed-seed proptest configuration, so every run sees the same cases.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x0c0a_25e5),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random weighted graph on `n` points with integer weights 1..=3. With
/// `split`, no edges cross between `[0, n/2)` and `[n/2, n)`.
pub fn random_space(rng: &mut ChaCha8Rng, n: usize, split: bool) -> Arc<ExtMetricSpace> {
    let half = if split { n / 2 } else { 0 };
    let same = |a: usize, b: usize| !split || ((a < half) == (b < half));
    let mut edges = Vec::new();
    for x in 1..n {
        let lo = if split && x >= half { half } else { 0 };
        if x > lo {
            let p = rng.random_range(lo..x);
            edges.push((p, x, rng.random_range(1..=3) as f64));
        }
    }
    for _ in 0..n / 2 {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a != b && same(a, b) {
            edges.push((a, b, rng.random_range(1..=3) as f64));
        }
    }
    let labels = (0..n).map(|i| format!("p{i}")).collect();
    Arc::new(ExtMetricSpace::from_edges(labels, &edges).unwrap())
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    let a: f64 = rng.sample(rand_distr::StandardNormal);
    let b: f64 = rng.sample(rand_distr::StandardNormal);
    C64::new(a, b)
}

pub fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| gaussian(rng)).collect()
}

pub fn random_multiplicity(rng: &mut ChaCha8Rng, n: usize, max: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(1..=max)).collect()
}

/// Gaussian operator with roughly `density` of its point blocks nonzero.
pub fn random_operator(rng: &mut ChaCha8Rng, m: &Arc<GeometricModule>, density: f64) -> ModuleOperator {
    let n = m.space().len();
    let keep: Vec<bool> = (0..n * n).map(|_| rng.random_bool(density)).collect();
    let pts = m.coord_points();
    let mat = CMatrix::from_fn(m.dim(), m.dim(), |i, j| {
        let z = gaussian(rng);
        if keep[pts[i] * n + pts[j]] {
            z
        } else {
            C64::new(0.0, 0.0)
        }
    });
    ModuleOperator::new(mat, m.clone(), m.clone()).unwrap()
}

pub fn module(space: &Arc<ExtMetricSpace>, mult: Vec<usize>) -> Arc<GeometricModule> {
    Arc::new(GeometricModule::new(space.clone(), mult).unwrap())
}

/// Every subset of `0..n` as a sorted index list, empty set excluded.
pub fn subsets(points: &[usize]) -> Vec<Vec<usize>> {
    (1u32..(1 << points.len()))
        .map(|mask| {
            points
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &p)| p)
                .collect()
        })
        .collect()
}
