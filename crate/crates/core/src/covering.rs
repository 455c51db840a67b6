//! Covering isometries and unitaries for coarse maps.
//!
//! Source fiber slots `(x, a)` are matched to target slots `(y, b)` with
//! `d(y, f(x)) <= spill`; the matching becomes a 0/1 matrix whose columns
//! are distinct standard basis vectors, hence an isometry.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::coarse_map::{transpose_inverse_check, CoarseMapRep};
use crate::dist::Dist;
use crate::error::{Error, HallWitness, Result};
use crate::linalg::CMatrix;
use crate::locality::support_relation;
use crate::matching::Bipartite;
use crate::module::{GeometricModule, ModuleOperator};
use crate::relation::{closeness_gap, same_space};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoveringVerification {
    /// `max |U^*U − 1|` entrywise.
    pub isometry_residual: f64,
    /// `max |UU^* − 1|` entrywise, for unitaries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unitary_residual: Option<f64>,
    /// `closeness_gap(support(U), graph(f))`.
    pub support_gap: Dist,
}

#[derive(Debug, Clone)]
pub struct CoveringResult {
    pub operator: ModuleOperator,
    pub spill: Dist,
    pub verification: CoveringVerification,
}

fn check_modules(f: &CoarseMapRep, m: &GeometricModule, n: &GeometricModule) -> Result<Vec<usize>> {
    let table = f.require_function()?;
    if !same_space(f.relation.source(), m.space()) || !same_space(f.relation.target(), n.space()) {
        return Err(Error::SpaceMismatch(
            "map spaces differ from the module spaces".into(),
        ));
    }
    Ok(table)
}

fn slot_graph(table: &[usize], m: &GeometricModule, n: &GeometricModule, spill: Dist) -> Bipartite {
    let ys = n.space();
    let mut adj = Vec::with_capacity(m.dim());
    for (x, &fx) in table.iter().enumerate() {
        let targets: Vec<usize> = (0..ys.len())
            .filter(|&y| ys.d(y, fx) <= spill)
            .flat_map(|y| n.fiber(y))
            .collect();
        for _ in 0..m.mult(x) {
            adj.push(targets.clone());
        }
    }
    Bipartite::new(m.dim(), n.dim(), adj)
}

fn hall_witness(g: &Bipartite, m: &GeometricModule, n: &GeometricModule) -> Option<HallWitness> {
    let matching = g.hopcroft_karp();
    let (left, right) = g.hall_violator(&matching)?;
    let mut source_points: Vec<usize> = left.iter().map(|&c| m.locate(c).0).collect();
    source_points.dedup();
    let mut target_points: Vec<usize> = right.iter().map(|&c| n.locate(c).0).collect();
    target_points.dedup();
    Some(HallWitness {
        demand: source_points.iter().map(|&x| m.mult(x)).sum(),
        capacity: target_points.iter().map(|&y| n.mult(y)).sum(),
        source_points,
        target_points,
    })
}

fn assemble(g: &Bipartite, m: &Arc<GeometricModule>, n: &Arc<GeometricModule>) -> Result<ModuleOperator> {
    let matching = g.lex_least_maximum();
    let mut mat = CMatrix::zeros(n.dim(), m.dim());
    for (col, row) in matching.left.iter().enumerate() {
        let row = row.expect("perfect on the left");
        mat[(row, col)] = C64::new(1.0, 0.0);
    }
    ModuleOperator::new(mat, m.clone(), n.clone())
}

/// Isometry `H_M → H_N` supported within `spill` of the graph of `f`.
pub fn build_covering_isometry(
    f: &CoarseMapRep,
    m: &Arc<GeometricModule>,
    n: &Arc<GeometricModule>,
    spill: Dist,
) -> Result<ModuleOperator> {
    let table = check_modules(f, m, n)?;
    let g = slot_graph(&table, m, n, spill);
    if let Some(w) = hall_witness(&g, m, n) {
        return Err(Error::HallViolation(w));
    }
    assemble(&g, m, n)
}

/// Unitary covering a coarse equivalence; needs equal total dimensions.
pub fn build_covering_unitary(
    f: &CoarseMapRep,
    m: &Arc<GeometricModule>,
    n: &Arc<GeometricModule>,
    spill: Dist,
) -> Result<ModuleOperator> {
    check_modules(f, m, n)?;
    if m.dim() != n.dim() {
        return Err(Error::DimensionMismatch(format!(
            "unitary needs equal total dimensions, got {} and {}",
            m.dim(),
            n.dim()
        )));
    }
    let report = transpose_inverse_check(f)?;
    if !report.is_equivalence() {
        return Err(Error::InvalidParameter(format!(
            "map is not a coarse equivalence at this scale: gaps {} and {}",
            report.gap_x, report.gap_y
        )));
    }
    // a left-perfect matching between equal-size sides is perfect
    build_covering_isometry(f, m, n, spill)
}

/// Builds the covering operator, optionally raising the spill to the
/// smallest realized target distance at which the slot matching exists.
pub fn cover(
    f: &CoarseMapRep,
    m: &Arc<GeometricModule>,
    n: &Arc<GeometricModule>,
    spill: Dist,
    auto_spill: bool,
    unitary: bool,
) -> Result<CoveringResult> {
    let build = |s: Dist| {
        if unitary {
            build_covering_unitary(f, m, n, s)
        } else {
            build_covering_isometry(f, m, n, s)
        }
    };
    let mut used = spill;
    let op = match build(spill) {
        Ok(op) => op,
        Err(Error::HallViolation(w)) if auto_spill => {
            let mut last = Err(Error::HallViolation(w));
            for &s in n.space().realized_distances().iter().filter(|&&s| s > spill) {
                last = build(s);
                if last.is_ok() {
                    used = s;
                    break;
                }
                if !matches!(last, Err(Error::HallViolation(_))) {
                    break;
                }
            }
            last?
        }
        Err(e) => return Err(e),
    };
    let verification = verify(&op, f, unitary)?;
    Ok(CoveringResult {
        operator: op,
        spill: used,
        verification,
    })
}

pub fn verify(u: &ModuleOperator, f: &CoarseMapRep, unitary: bool) -> Result<CoveringVerification> {
    let mat = u.matrix();
    let uu = mat.adjoint().matmul(mat)?;
    let isometry_residual = uu.max_abs_diff(&CMatrix::identity(mat.cols()));
    let unitary_residual = if unitary {
        let vv = mat.matmul(&mat.adjoint())?;
        Some(vv.max_abs_diff(&CMatrix::identity(mat.rows())))
    } else {
        None
    };
    let support_gap = closeness_gap(&support_relation(u, 0.0), &f.relation)?;
    Ok(CoveringVerification {
        isometry_residual,
        unitary_residual,
        support_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    fn module(space: &Arc<crate::space::ExtMetricSpace>, mult: Vec<usize>) -> Arc<GeometricModule> {
        Arc::new(GeometricModule::new(space.clone(), mult).unwrap())
    }

    #[test]
    fn identity_covers_with_identity() {
        let p = Arc::new(gen::path(5).unwrap());
        let m = module(&p, vec![1; 5]);
        let f = CoarseMapRep::from_function(p.clone(), p.clone(), &[0, 1, 2, 3, 4]).unwrap();
        let u = build_covering_unitary(&f, &m, &m, Dist::ZERO).unwrap();
        assert_eq!(u.matrix(), &CMatrix::identity(5));
    }

    #[test]
    fn collapse_into_double_fiber() {
        let src = Arc::new(gen::path(2).unwrap());
        let tgt = Arc::new(gen::path(1).unwrap());
        let f = CoarseMapRep::from_function(src.clone(), tgt.clone(), &[0, 0]).unwrap();
        let u = build_covering_isometry(&f, &module(&src, vec![1, 1]), &module(&tgt, vec![2]), Dist::ZERO)
            .unwrap();
        assert_eq!(u.matrix(), &CMatrix::identity(2));
        let err = build_covering_isometry(&f, &module(&src, vec![1, 1]), &module(&tgt, vec![1]), Dist::ZERO)
            .unwrap_err();
        match err {
            Error::HallViolation(w) => {
                assert_eq!(w.source_points, vec![0, 1]);
                assert_eq!((w.demand, w.capacity), (2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn halving_unitary_has_unit_propagation() {
        let n = 5;
        let src = Arc::new(gen::path(2 * n).unwrap());
        let tgt = Arc::new(gen::path(n).unwrap());
        let f: Vec<usize> = (0..2 * n).map(|i| i / 2).collect();
        let f = CoarseMapRep::from_function(src.clone(), tgt.clone(), &f).unwrap();
        let m = module(&src, vec![1; 2 * n]);
        let nm = module(&tgt, vec![2; n]);
        let res = cover(&f, &m, &nm, Dist::ZERO, false, true).unwrap();
        assert_eq!(res.verification.isometry_residual, 0.0);
        assert_eq!(res.verification.unitary_residual, Some(0.0));
        assert_eq!(res.verification.support_gap, Dist::ZERO);
        let supp = support_relation(&res.operator, 0.0);
        assert!(supp.is_subset(&f.relation));
    }

    #[test]
    fn auto_spill_finds_minimal_feasible_radius() {
        let p = Arc::new(gen::path(4).unwrap());
        let f = CoarseMapRep::from_function(p.clone(), p.clone(), &[1, 1, 2, 2]).unwrap();
        let m = module(&p, vec![1; 4]);
        assert!(matches!(
            cover(&f, &m, &m, Dist::ZERO, false, false),
            Err(Error::HallViolation(_))
        ));
        let res = cover(&f, &m, &m, Dist::ZERO, true, false).unwrap();
        assert_eq!(res.spill, Dist::new(1.0));
        assert!(res.verification.support_gap <= Dist::new(1.0));
    }

    #[test]
    fn unequal_dimensions_rejected() {
        let p = Arc::new(gen::path(3).unwrap());
        let f = CoarseMapRep::from_function(p.clone(), p.clone(), &[0, 1, 2]).unwrap();
        let err = build_covering_unitary(&f, &module(&p, vec![1; 3]), &module(&p, vec![2; 3]), Dist::ZERO);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }
}
