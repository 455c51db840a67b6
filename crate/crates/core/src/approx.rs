//! Approximating relations `Φ_δ[T]` and their conversion to coarse maps.
//!
//! `Φ_δ[T]` is the union of the products `B × A` with `diam A <= r`,
//! `diam B <= R` and `‖χ_B T χ_A‖ > δ`.

use std::collections::BTreeSet;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cliques::{all_bounded_sets, maximal_bounded_sets};
use crate::coarse_map::CoarseMapRep;
use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::module::ModuleOperator;
use crate::relation::{transpose, Relation};
use crate::space::ExtMetricSpace;

/// Largest space on which every bounded subset is enumerated.
pub const ALL_SUBSETS_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum BoundedMode {
    /// Closed balls of radius `r/2` (resp. `R/2`) around every point.
    Balls,
    /// Maximal bounded sets; equal to `AllSubsets` by monotonicity.
    #[default]
    MaximalCliques,
    AllSubsets,
}

impl FromStr for BoundedMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "balls" => Ok(BoundedMode::Balls),
            "maximal_cliques" => Ok(BoundedMode::MaximalCliques),
            "all_subsets" => Ok(BoundedMode::AllSubsets),
            other => Err(Error::InvalidParameter(format!("unknown bounded mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxParams {
    pub delta: f64,
    /// Diameter bound for source sets.
    pub r: Dist,
    /// Diameter bound for target sets.
    #[serde(rename = "R")]
    pub big_r: Dist,
    pub mode: BoundedMode,
}

impl ApproxParams {
    pub fn new(delta: f64, r: f64, big_r: f64, mode: BoundedMode) -> Result<Self> {
        let p = ApproxParams {
            delta,
            r: Dist::try_new(r).ok_or_else(|| Error::InvalidParameter(format!("bad r {r}")))?,
            big_r: Dist::try_new(big_r)
                .ok_or_else(|| Error::InvalidParameter(format!("bad R {big_r}")))?,
            mode,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "delta must be positive and finite, got {}",
                self.delta
            )));
        }
        if !self.r.is_finite() || !self.big_r.is_finite() {
            return Err(Error::InvalidParameter("radii must be finite".into()));
        }
        Ok(())
    }

    /// The parameters for the adjoint: source and target radii swap.
    pub fn swapped(&self) -> Self {
        ApproxParams {
            r: self.big_r,
            big_r: self.r,
            ..*self
        }
    }
}

/// Candidate bounded sets of a space, restricted to points carrying fibers.
pub fn bounded_sets(space: &ExtMetricSpace, points: &[usize], diam: Dist, mode: BoundedMode) -> Result<Vec<Vec<usize>>> {
    Ok(match mode {
        BoundedMode::Balls => {
            let half = diam.half();
            let set: BTreeSet<Vec<usize>> = points
                .iter()
                .map(|&c| {
                    points
                        .iter()
                        .copied()
                        .filter(|&y| space.d(c, y) <= half)
                        .collect()
                })
                .collect();
            set.into_iter().collect()
        }
        BoundedMode::MaximalCliques => maximal_bounded_sets(space, points, diam),
        BoundedMode::AllSubsets => {
            if space.len() > ALL_SUBSETS_LIMIT {
                return Err(Error::SizeLimit {
                    what: "all_subsets enumeration",
                    size: space.len(),
                    limit: ALL_SUBSETS_LIMIT,
                });
            }
            let mut sets = all_bounded_sets(space, points, diam);
            // largest first, so later small products are usually already covered
            sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
            sets
        }
    })
}

pub fn approx_relation(t: &ModuleOperator, p: &ApproxParams) -> Result<Relation> {
    p.validate()?;
    let src = t.source();
    let tgt = t.target();
    let (xs, ys) = (src.space(), tgt.space());
    let x_pts: Vec<usize> = (0..xs.len()).filter(|&x| src.mult(x) > 0).collect();
    let y_pts: Vec<usize> = (0..ys.len()).filter(|&y| tgt.mult(y) > 0).collect();
    let a_sets = bounded_sets(xs, &x_pts, p.r, p.mode)?;
    let b_sets = bounded_sets(ys, &y_pts, p.big_r, p.mode)?;

    let nx = xs.len();
    let block = t.block_norms();
    let qualifies = |b: &[usize], a: &[usize]| -> bool {
        // cheap brackets before the full norm: max block <= norm <= Frobenius
        let mut max_block: f64 = 0.0;
        let mut fro_sq = 0.0;
        for &y in b {
            for &x in a {
                let v = block[y * nx + x];
                max_block = max_block.max(v);
                fro_sq += v * v;
            }
        }
        if max_block > p.delta {
            return true;
        }
        if fro_sq.sqrt() <= p.delta {
            return false;
        }
        t.cut_norm(b, a) > p.delta
    };

    let pairs: BTreeSet<(usize, usize)> = if p.mode == BoundedMode::AllSubsets {
        // sequential so that products already covered are skipped
        let mut acc = BTreeSet::new();
        for b in &b_sets {
            for a in &a_sets {
                let covered = b.iter().all(|&y| a.iter().all(|&x| acc.contains(&(y, x))));
                if !covered && qualifies(b, a) {
                    for &y in b {
                        for &x in a {
                            acc.insert((y, x));
                        }
                    }
                }
            }
        }
        acc
    } else {
        b_sets
            .par_iter()
            .flat_map_iter(|b| {
                a_sets
                    .iter()
                    .filter(|a| qualifies(b, a))
                    .flat_map(|a| b.iter().flat_map(move |&y| a.iter().map(move |&x| (y, x))))
                    .collect::<Vec<_>>()
            })
            .collect()
    };
    Relation::new(xs.clone(), ys.clone(), pairs)
}

fn pick_per_fiber(rel: &Relation, mut choose: impl FnMut(usize, &[usize]) -> usize) -> CoarseMapRep {
    let target = rel.target();
    let mut pairs = Vec::new();
    let mut fiber_diameter = Dist::ZERO;
    for x in rel.domain() {
        let fiber = rel.fiber(x);
        fiber_diameter = fiber_diameter.max(target.diameter_of(&fiber));
        pairs.push((choose(x, &fiber), x));
    }
    let relation = Relation::new(rel.source().clone(), target.clone(), pairs).expect("valid pairs");
    let mut rep = CoarseMapRep::from_relation(relation);
    rep.fiber_diameter = fiber_diameter;
    rep
}

/// Picks the smallest target index in each fiber `R(x)`. The fiber
/// diameter of `rel` is recorded on the result.
pub fn relation_to_map(rel: &Relation) -> CoarseMapRep {
    pick_per_fiber(rel, |_, fiber| fiber[0])
}

/// Like [`relation_to_map`], but picks the fiber point `y` with the largest
/// block `‖χ_y T χ_x‖`, smallest index on ties.
pub fn operator_to_map(t: &ModuleOperator, rel: &Relation) -> CoarseMapRep {
    let nx = t.source().space().len();
    let block = t.block_norms();
    pick_per_fiber(rel, |x, fiber| {
        let mut best = fiber[0];
        for &y in &fiber[1..] {
            if block[y * nx + x] > block[best * nx + x] {
                best = y;
            }
        }
        best
    })
}

/// `op Φ_δ[T]` with radii `(r, R)` against `Φ_δ[T^*]` with radii `(R, r)`.
pub fn adjoint_duality_check(t: &ModuleOperator, p: &ApproxParams) -> Result<bool> {
    let phi = approx_relation(t, p)?;
    let phi_adj = approx_relation(&t.adjoint(), &p.swapped())?;
    Ok(transpose(&phi) == phi_adj)
}
