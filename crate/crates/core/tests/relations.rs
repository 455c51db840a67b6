mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;
use roe_core::coarse_map::{transpose_inverse_check, CoarseMapRep};
use roe_core::relation::{closeness_gap, compose, entourage_at, expansion_at, transpose};
use roe_core::{gen, Dist, Relation};

use common::{random_space, rng};

fn random_relation(seed: u64, n: usize, density: f64) -> Relation {
    let mut r = rng(seed);
    let x = random_space(&mut r, n, seed.is_multiple_of(3));
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|y| (0..n).map(move |x| (y, x)))
        .filter(|_| r.random_bool(density))
        .collect();
    Relation::new(x.clone(), x, pairs).unwrap()
}

/// sup of d(y, y') over pairs whose sources are r-close, scanned directly.
fn expansion_oracle(rel: &Relation, r: Dist) -> Dist {
    let (xs, ys) = (rel.source(), rel.target());
    let mut best = Dist::ZERO;
    for &(y, x) in rel.pairs() {
        for &(y2, x2) in rel.pairs() {
            if xs.d(x, x2) <= r {
                best = best.max(ys.d(y, y2));
            }
        }
    }
    best
}

fn rebuild(rel: &Relation, pairs: impl IntoIterator<Item = (usize, usize)>) -> Relation {
    Relation::new(rel.source().clone(), rel.target().clone(), pairs).unwrap()
}

proptest! {
    #![proptest_config(common::config(64))]

    #[test]
    fn diagonal_is_a_two_sided_unit(seed in any::<u64>(), n in 1usize..9) {
        let rel = random_relation(seed, n, 0.3);
        let d = Relation::diagonal(rel.source().clone());
        let (left, right) = (compose(&d, &rel).unwrap(), compose(&rel, &d).unwrap());
        prop_assert_eq!(left.pairs(), rel.pairs());
        prop_assert_eq!(right.pairs(), rel.pairs());
    }

    #[test]
    fn entourages_compose_within_sum(seed in any::<u64>(), n in 2usize..9, r in 0u32..5, s in 0u32..5) {
        let mut g = rng(seed);
        let x = random_space(&mut g, n, seed % 2 == 0);
        let (r, s) = (Dist::from(r), Dist::from(s));
        let c = compose(&entourage_at(&x, r), &entourage_at(&x, s)).unwrap();
        prop_assert!(c.is_subset(&entourage_at(&x, r + s)));
    }

    #[test]
    fn entourages_compose_exactly_on_paths(n in 1usize..12, r in 0u32..6, s in 0u32..6) {
        let p = Arc::new(gen::path(n).unwrap());
        let (r, s) = (Dist::from(r), Dist::from(s));
        let c = compose(&entourage_at(&p, r), &entourage_at(&p, s)).unwrap();
        let e = entourage_at(&p, r + s);
        prop_assert_eq!(c.pairs(), e.pairs());
    }

    #[test]
    fn closeness_gap_is_a_pseudometric(seed in any::<u64>(), n in 1usize..8) {
        let a = random_relation(seed, n, 0.3);
        let mut g = rng(seed ^ 0x5eed);
        let pick = |g: &mut rand_chacha::ChaCha8Rng| -> Vec<(usize, usize)> {
            (0..n).flat_map(|y| (0..n).map(move |x| (y, x))).filter(|_| g.random_bool(0.3)).collect()
        };
        let b = rebuild(&a, pick(&mut g));
        let c = rebuild(&a, pick(&mut g));
        prop_assert_eq!(closeness_gap(&a, &a).unwrap(), Dist::ZERO);
        prop_assert_eq!(closeness_gap(&a, &b).unwrap(), closeness_gap(&b, &a).unwrap());
        let ac = closeness_gap(&a, &c).unwrap();
        let via = closeness_gap(&a, &b).unwrap() + closeness_gap(&b, &c).unwrap();
        prop_assert!(ac <= via, "{ac} > {via}");
    }

    #[test]
    fn expansion_matches_pairwise_scan(seed in any::<u64>(), n in 1usize..9) {
        let rel = random_relation(seed, n, 0.25);
        for &r in rel.source().realized_distances() {
            prop_assert_eq!(expansion_at(&rel, r), expansion_oracle(&rel, r));
        }
    }

    #[test]
    fn function_expansion_is_finite_iff_components_map_into_components(seed in any::<u64>(), n in 2usize..9) {
        let mut g = rng(seed);
        let x = random_space(&mut g, n, true);
        let f: Vec<usize> = (0..n).map(|_| g.random_range(0..n)).collect();
        let rel = Relation::graph(x.clone(), x.clone(), &f).unwrap();
        let classical = (0..n).all(|a| (0..n).all(|b| x.d(a, b).is_inf() || x.d(f[a], f[b]).is_finite()));
        let top = *x.realized_distances().last().unwrap();
        prop_assert_eq!(expansion_at(&rel, top).is_finite(), classical);
    }

    #[test]
    fn inverse_gaps_only_see_the_relation(seed in any::<u64>(), n in 2usize..9) {
        let mut g = rng(seed);
        let x = random_space(&mut g, n, false);
        let perm: Vec<usize> = {
            let mut p: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                p.swap(i, g.random_range(0..=i));
            }
            p
        };
        let f = CoarseMapRep::from_function(x.clone(), x.clone(), &perm).unwrap();
        let twin = CoarseMapRep::from_relation(rebuild(&f.relation, f.relation.pairs().iter().copied()));
        prop_assert_eq!(closeness_gap(&f.relation, &twin.relation).unwrap(), Dist::ZERO);
        prop_assert_eq!(transpose_inverse_check(&f).unwrap(), transpose_inverse_check(&twin).unwrap());
    }

    #[test]
    fn transpose_is_an_involution(seed in any::<u64>(), n in 1usize..9) {
        let rel = random_relation(seed, n, 0.3);
        let back = transpose(&transpose(&rel));
        prop_assert_eq!(back.pairs(), rel.pairs());
    }
}

#[test]
fn halving_map_has_inverse_gaps_at_most_one() {
    let n = 8;
    let src = Arc::new(gen::path(2 * n).unwrap());
    let tgt = Arc::new(gen::path(n).unwrap());
    let f: Vec<usize> = (0..2 * n).map(|i| i / 2).collect();
    let f = CoarseMapRep::from_function(src, tgt, &f).unwrap();
    let rep = transpose_inverse_check(&f).unwrap();
    assert!(rep.gap_x <= Dist::new(1.0) && rep.gap_y <= Dist::new(1.0), "{rep:?}");
}

#[test]
fn constant_map_is_not_an_embedding() {
    let p = Arc::new(gen::path(8).unwrap());
    let f = CoarseMapRep::from_function(p.clone(), p, &[3; 8]).unwrap();
    assert_eq!(transpose_inverse_check(&f).unwrap_err().code(), "not_an_embedding");
}
