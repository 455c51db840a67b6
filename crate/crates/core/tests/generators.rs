mod common;

use proptest::prelude::*;
use roe_core::gen::{self, SpaceKind};
use roe_core::io::SpaceFile;
use roe_core::{Dist, ExtMetricSpace};

fn check_metric(s: &ExtMetricSpace) -> Result<(), TestCaseError> {
    let n = s.len();
    for a in 0..n {
        prop_assert_eq!(s.d(a, a), Dist::ZERO);
        for b in 0..n {
            prop_assert_eq!(s.d(a, b), s.d(b, a));
            for c in 0..n {
                if s.component_of(a) == s.component_of(b) && s.component_of(b) == s.component_of(c) {
                    prop_assert!(s.d(a, c) <= s.d(a, b) + s.d(b, c));
                }
            }
        }
    }
    prop_assert!(s.validate().is_ok());
    Ok(())
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn generated_spaces_are_metrics(n in 1usize..10, w in 1usize..5, h in 1usize..5, seed in any::<u64>()) {
        check_metric(&gen::path(n).unwrap())?;
        check_metric(&gen::cycle(n).unwrap())?;
        check_metric(&gen::grid2d(w, h).unwrap())?;
        check_metric(&gen::disjoint_points(n).unwrap())?;
        check_metric(&gen::cluster_space(n.min(6)).unwrap())?;
        check_metric(&gen::disjoint_cliques(&[w, h, n]).unwrap())?;
        let d = 2 + (seed % 2) as usize;
        check_metric(&gen::random_regular(2 * n + 4, d, seed).unwrap())?;
    }

    #[test]
    fn random_regular_is_reproducible(seed in any::<u64>(), n in 3usize..20) {
        let a = gen::gen(SpaceKind::RandomRegular, &[2 * n, 3], seed).unwrap();
        let b = gen::gen(SpaceKind::RandomRegular, &[2 * n, 3], seed).unwrap();
        let ja = serde_json::to_string(&SpaceFile::from_space(&a)).unwrap();
        let jb = serde_json::to_string(&SpaceFile::from_space(&b)).unwrap();
        prop_assert_eq!(ja, jb);
    }
}

#[test]
fn path_four_has_end_to_end_distance_three() {
    assert_eq!(gen::path(4).unwrap().d(0, 3), Dist::new(3.0));
}

#[test]
fn cluster_space_three() {
    let s = gen::cluster_space(3).unwrap();
    assert_eq!(s.labels(), ["1", "2a", "2b", "3a", "3b", "3c"]);
    assert_eq!(s.d(1, 2), Dist::new(1.0));
    assert_eq!(s.d(3, 5), Dist::new(1.0));
    assert_eq!(s.d(0, 1), Dist::new(1.0));
    assert_eq!(s.d(0, 4), Dist::new(2.0));
    assert_eq!(s.d(2, 5), Dist::new(1.0));
}

#[test]
fn disjoint_cliques_components() {
    let s = gen::disjoint_cliques(&[2, 4, 8]).unwrap();
    assert_eq!(s.n_components(), 3);
    for comp in s.components() {
        assert_eq!(s.diameter_of(&comp), Dist::new(1.0));
    }
    assert!(s.d(0, 2).is_inf());
}

#[test]
fn invalid_parameters_are_rejected() {
    assert!(gen::path(0).is_err());
    assert!(gen::random_regular(5, 3, 1).is_err());
    assert!(gen::gen(SpaceKind::Grid2d, &[3], 0).is_err());
}
