mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use roe_core::approx::{adjoint_duality_check, approx_relation, relation_to_map, ApproxParams, BoundedMode};
use roe_core::linalg::singular_values;
use roe_core::locality::{ql_value, support_relation, QlMode};
use roe_core::module::{ad_map, matrix_unit};
use roe_core::relation::{closeness_gap, expansion_at};
use roe_core::{gen, CMatrix, Dist, GeometricModule, ModuleOperator, C64};

use common::{module, random_multiplicity, random_operator, random_space, rng, subsets};

fn instance(seed: u64, n: usize) -> ModuleOperator {
    let mut g = rng(seed);
    let x = random_space(&mut g, n, seed.is_multiple_of(3));
    let m = module(&x, random_multiplicity(&mut g, n, 2));
    random_operator(&mut g, &m, 0.5)
}

fn params(delta: f64, r: Dist, big_r: Dist, mode: BoundedMode) -> ApproxParams {
    ApproxParams::new(delta, r.value(), big_r.value(), mode).unwrap()
}

/// Union of `B×A` over every pair of bounded sets with a large cut.
fn phi_oracle(t: &ModuleOperator, p: &ApproxParams) -> BTreeSet<(usize, usize)> {
    let x = t.source().space();
    let pts: Vec<usize> = (0..x.len()).collect();
    let sets = subsets(&pts);
    let mut out = BTreeSet::new();
    for b in sets.iter().filter(|b| x.diameter_of(b) <= p.big_r) {
        for a in sets.iter().filter(|a| x.diameter_of(a) <= p.r) {
            let cut = t.cut(b, a);
            if singular_values(&cut).0[0] > p.delta {
                for &y in b {
                    for &xx in a {
                        out.insert((y, xx));
                    }
                }
            }
        }
    }
    out
}

fn pick_radius(g: &mut impl Rng, grid: &[Dist]) -> Dist {
    grid[g.random_range(0..grid.len())]
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn all_modes_but_balls_match_the_subset_oracle(seed in any::<u64>(), n in 1usize..7, delta in 0.2f64..3.0) {
        let t = instance(seed, n);
        let grid = t.source().space().realized_distances().to_vec();
        let mut g = rng(seed ^ 1);
        let (r, big_r) = (pick_radius(&mut g, &grid), pick_radius(&mut g, &grid));
        for mode in [BoundedMode::MaximalCliques, BoundedMode::AllSubsets] {
            let p = params(delta, r, big_r, mode);
            let got = approx_relation(&t, &p).unwrap();
            prop_assert_eq!(got.pairs(), &phi_oracle(&t, &p), "{:?}", mode);
        }
    }

    #[test]
    fn cliques_equal_all_subsets(seed in any::<u64>(), n in 2usize..11, delta in 0.2f64..3.0) {
        let t = instance(seed, n);
        let grid = t.source().space().realized_distances().to_vec();
        let mut g = rng(seed ^ 2);
        let (r, big_r) = (pick_radius(&mut g, &grid), pick_radius(&mut g, &grid));
        let a = approx_relation(&t, &params(delta, r, big_r, BoundedMode::MaximalCliques)).unwrap();
        let b = approx_relation(&t, &params(delta, r, big_r, BoundedMode::AllSubsets)).unwrap();
        prop_assert_eq!(a.pairs(), b.pairs());
    }

    #[test]
    fn phi_is_monotone_in_every_parameter(seed in any::<u64>(), n in 2usize..9, d1 in 0.2f64..2.0, d2 in 0.2f64..2.0) {
        let t = instance(seed, n);
        let grid = t.source().space().realized_distances().to_vec();
        let mut g = rng(seed ^ 3);
        let (mut r1, mut r2) = (pick_radius(&mut g, &grid), pick_radius(&mut g, &grid));
        if r1 > r2 { std::mem::swap(&mut r1, &mut r2); }
        let (lo, hi) = (d1.min(d2), d1.max(d2));
        for mode in [BoundedMode::Balls, BoundedMode::MaximalCliques] {
            let phi = |d, r, big_r| approx_relation(&t, &params(d, r, big_r, mode)).unwrap();
            let base = phi(lo, r1, r1);
            prop_assert!(phi(hi, r1, r1).is_subset(&base));
            prop_assert!(base.is_subset(&phi(lo, r2, r1)));
            prop_assert!(base.is_subset(&phi(lo, r1, r2)));
        }
    }

    #[test]
    fn phi_lies_near_the_support(seed in any::<u64>(), n in 2usize..9, delta in 0.1f64..2.0) {
        let t = instance(seed, n);
        let x = t.source().space().clone();
        let grid = x.realized_distances().to_vec();
        let mut g = rng(seed ^ 4);
        let (r, big_r) = (pick_radius(&mut g, &grid), pick_radius(&mut g, &grid));
        let phi = approx_relation(&t, &params(delta, r, big_r, BoundedMode::MaximalCliques)).unwrap();
        let supp = support_relation(&t, 0.0);
        for &(y, xx) in phi.pairs() {
            let near = supp.pairs().iter().any(|&(y2, x2)| x.d(y, y2) <= big_r && x.d(xx, x2) <= r);
            prop_assert!(near, "({y},{xx}) is far from the support");
        }
    }

    #[test]
    fn adjoint_gives_the_transpose(seed in any::<u64>(), n in 2usize..9, delta in 0.2f64..2.0) {
        let t = instance(seed, n);
        let grid = t.source().space().realized_distances().to_vec();
        let mut g = rng(seed ^ 5);
        let (r, big_r) = (pick_radius(&mut g, &grid), pick_radius(&mut g, &grid));
        for mode in [BoundedMode::Balls, BoundedMode::MaximalCliques, BoundedMode::AllSubsets] {
            prop_assert!(adjoint_duality_check(&t, &params(delta, r, big_r, mode)).unwrap());
        }
    }

    /// Rank-one witnesses: two pairs of Φ over r-close sources come from
    /// r-bounded sets at most 3r apart. When Ad(U) sends each matrix unit
    /// between 3r-close basis vectors to something R0-quasi-local below δ²,
    /// the approximating relation expands r-balls by at most R + R0 + R.
    #[test]
    fn phi_expansion_is_controlled_by_matrix_units(seed in any::<u64>(), n in 2usize..8) {
        let mut g = rng(seed);
        let x = random_space(&mut g, n, false);
        let m = module(&x, vec![1; n]);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, g.random_range(0..=i));
        }
        let u = ModuleOperator::new(
            CMatrix::from_fn(n, n, |i, j| if perm[j] == i { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) }),
            m.clone(),
            m.clone(),
        ).unwrap();
        let grid = x.realized_distances().to_vec();
        let delta = 0.7;
        let r = pick_radius(&mut g, &grid);
        let big_r = pick_radius(&mut g, &grid);
        // smallest R0 on the grid making every image quasi-local below δ²
        let reach = r + r + r;
        let mut r0 = Dist::ZERO;
        for a in 0..n {
            for b in 0..n {
                if x.d(a, b) > reach {
                    continue;
                }
                let e = matrix_unit(&m.basis_vector(a, 0), &m, &m.basis_vector(b, 0), &m).unwrap();
                let img = ad_map(&u, &e).unwrap();
                let need = grid
                    .iter()
                    .copied()
                    .find(|&s| ql_value(&img, s, QlMode::Exact).unwrap().value < delta * delta)
                    .unwrap();
                r0 = r0.max(need);
            }
        }
        let phi = approx_relation(&u, &params(delta, r, big_r, BoundedMode::MaximalCliques)).unwrap();
        prop_assert!(expansion_at(&phi, r) <= big_r + r0 + big_r);
    }
}

#[test]
fn zero_operator_has_empty_relation_in_every_mode() {
    let x = Arc::new(gen::path(6).unwrap());
    let m = Arc::new(GeometricModule::uniform(x, 2));
    let z = ModuleOperator::zeros(m.clone(), m);
    for mode in [BoundedMode::Balls, BoundedMode::MaximalCliques, BoundedMode::AllSubsets] {
        assert!(approx_relation(&z, &params(0.1, Dist::new(2.0), Dist::new(2.0), mode)).unwrap().is_empty());
    }
}

#[test]
fn delta_above_the_norm_gives_nothing() {
    let x = Arc::new(gen::cycle(7).unwrap());
    let m = Arc::new(GeometricModule::uniform(x, 1));
    let id = ModuleOperator::identity(m);
    let p = params(1.1, Dist::new(3.0), Dist::new(3.0), BoundedMode::MaximalCliques);
    assert!(approx_relation(&id, &p).unwrap().is_empty());
}

#[test]
fn identity_recovers_a_map_within_r_plus_big_r_of_the_identity() {
    let x = Arc::new(gen::path(9).unwrap());
    let m = Arc::new(GeometricModule::uniform(x.clone(), 1));
    let id = ModuleOperator::identity(m);
    for r in 0..3 {
        let p = params(0.9, Dist::from(r), Dist::from(r), BoundedMode::MaximalCliques);
        let f = relation_to_map(&approx_relation(&id, &p).unwrap());
        let diag = roe_core::Relation::diagonal(x.clone());
        assert!(closeness_gap(&f.relation, &diag).unwrap() <= Dist::from(2 * r), "r={r}");
    }
}

#[test]
fn zero_multiplicity_points_never_appear() {
    let x = Arc::new(gen::path(5).unwrap());
    let m = Arc::new(GeometricModule::new(x, vec![1, 0, 1, 0, 1]).unwrap());
    let id = ModuleOperator::identity(m);
    let p = params(0.5, Dist::new(2.0), Dist::new(2.0), BoundedMode::MaximalCliques);
    let phi = approx_relation(&id, &p).unwrap();
    assert!(phi.pairs().iter().all(|&(y, x)| y % 2 == 0 && x % 2 == 0));
}
