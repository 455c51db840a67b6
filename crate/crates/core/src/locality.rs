//! Supports, propagation, quasi-locality and approximability.
//!
//! For an operator `T` on a module over `X` and a radius `r`:
//!
//! - `ql(T, r) = max_B ‖χ_B T χ_{X∖N_r(B)}‖`, the largest cut-down between
//!   `r`-separated sets;
//! - `app(T, r) = min { ‖T − S‖ : prop(S) <= r }`;
//! - `T_{>r}` keeps the blocks at distance `> r`.
//!
//! Any `S` of propagation `<= r` vanishes on `r`-separated cut-downs, so
//! `ql(T, r) <= app(T, r) <= ‖T_{>r}‖`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::linalg::{band_nearness, norm, BandOptions, CMatrix};
use crate::module::ModuleOperator;
use crate::profile::{Exactness, Profile, ProfileKind, ProfileSample};
use crate::relation::Relation;
use crate::space::ExtMetricSpace;

/// Largest number of target points for which `ql` is computed by exhaustive
/// enumeration.
pub const QL_EXACT_LIMIT: usize = 20;

const ZERO: C64 = C64::new(0.0, 0.0);

/// `1e-10 · ‖T‖`.
pub fn default_tol(t: &ModuleOperator) -> f64 {
    1e-10 * t.norm()
}

/// `{(y, x) : ‖T_{yx}‖ > tol}`.
pub fn support_relation(t: &ModuleOperator, tol: f64) -> Relation {
    let ny = t.target().space().len();
    let nx = t.source().space().len();
    let norms = t.block_norms();
    let pairs = (0..ny)
        .flat_map(|y| (0..nx).map(move |x| (y, x)))
        .filter(|&(y, x)| norms[y * nx + x] > tol);
    Relation::new(t.source().space().clone(), t.target().space().clone(), pairs)
        .expect("block indices are in range")
}

/// `max d(y, x)` over the support; `INF` when the support crosses components.
pub fn propagation(t: &ModuleOperator, tol: f64) -> Result<Dist> {
    t.require_same_space()?;
    let space = t.source().space();
    Ok(support_relation(t, tol)
        .pairs()
        .iter()
        .map(|&(y, x)| space.d(x, y))
        .max()
        .unwrap_or(Dist::ZERO))
}

/// `(T_{<=r}, T_{>r})` by block distance; the two parts sum to `T` exactly.
pub fn far_truncation(t: &ModuleOperator, r: Dist) -> Result<(ModuleOperator, ModuleOperator)> {
    t.require_same_space()?;
    let space = t.source().space().clone();
    let le = t.mask_blocks(|y, x| space.d(x, y) <= r);
    let gt = t.mask_blocks(|y, x| space.d(x, y) > r);
    Ok((le, gt))
}

/// An operator with each row and column tagged by its point, with all-zero
/// rows and columns dropped. Every quantity in this module is invariant
/// under that compression.
#[derive(Debug, Clone)]
pub(crate) struct PointMatrix {
    pub m: CMatrix,
    pub row_pts: Vec<usize>,
    pub col_pts: Vec<usize>,
    pub space: Arc<ExtMetricSpace>,
}

impl PointMatrix {
    pub fn from_operator(t: &ModuleOperator) -> PointMatrix {
        Self::compress(
            t.matrix(),
            &t.target().coord_points(),
            &t.source().coord_points(),
            t.source().space().clone(),
        )
    }

    pub fn compress(m: &CMatrix, row_pts: &[usize], col_pts: &[usize], space: Arc<ExtMetricSpace>) -> PointMatrix {
        let rows = m.nonzero_rows();
        let cols = m.nonzero_cols();
        PointMatrix {
            m: m.select(&rows, &cols),
            row_pts: rows.iter().map(|&i| row_pts[i]).collect(),
            col_pts: cols.iter().map(|&j| col_pts[j]).collect(),
            space,
        }
    }

    /// Rank-one `w v^*` from sparse vectors given as (point, value) lists.
    pub fn outer(w: &[(usize, C64)], v: &[(usize, C64)], space: Arc<ExtMetricSpace>) -> PointMatrix {
        PointMatrix {
            m: CMatrix::from_fn(w.len(), v.len(), |i, j| w[i].1 * v[j].1.conj()),
            row_pts: w.iter().map(|p| p.0).collect(),
            col_pts: v.iter().map(|p| p.0).collect(),
            space,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.m.rows() == 0 || self.m.cols() == 0
    }

    pub fn pattern(&self, r: Dist) -> Vec<bool> {
        let mut p = Vec::with_capacity(self.m.rows() * self.m.cols());
        for &y in &self.row_pts {
            for &x in &self.col_pts {
                p.push(self.space.d(x, y) <= r);
            }
        }
        p
    }

    fn masked(&self, keep: &[bool], inside: bool) -> CMatrix {
        let cols = self.m.cols();
        CMatrix::from_fn(self.m.rows(), cols, |i, j| {
            if keep[i * cols + j] == inside {
                self.m[(i, j)]
            } else {
                ZERO
            }
        })
    }

    pub fn truncations(&self, r: Dist) -> (CMatrix, CMatrix) {
        let p = self.pattern(r);
        (self.masked(&p, true), self.masked(&p, false))
    }

    /// `‖T_{>r}‖`.
    pub fn gt_norm(&self, r: Dist) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        norm(&self.truncations(r).1)
    }

    fn distinct(pts: &[usize]) -> Vec<usize> {
        let s: BTreeSet<usize> = pts.iter().copied().collect();
        s.into_iter().collect()
    }

    /// Norm of the cut-down to rows over `b` and columns over `a`.
    fn cut_norm(&self, b: impl Fn(usize) -> bool, a: impl Fn(usize) -> bool) -> f64 {
        let rows: Vec<usize> = (0..self.row_pts.len()).filter(|&i| b(self.row_pts[i])).collect();
        let cols: Vec<usize> = (0..self.col_pts.len()).filter(|&j| a(self.col_pts[j])).collect();
        if rows.is_empty() || cols.is_empty() {
            return 0.0;
        }
        norm(&self.m.select(&rows, &cols))
    }

    /// Certified lower bound: `B` ranges over singletons and, per component,
    /// the points no farther than the median from the component's first point.
    pub fn ql_lower(&self, r: Dist) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let rows = Self::distinct(&self.row_pts);
        let mut candidates: Vec<Vec<usize>> = rows.iter().map(|&y| vec![y]).collect();
        let mut by_comp: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &y in &rows {
            by_comp.entry(self.space.component_of(y)).or_default().push(y);
        }
        for pts in by_comp.values() {
            let x0 = pts[0];
            let mut ds: Vec<Dist> = pts.iter().map(|&y| self.space.d(x0, y)).collect();
            ds.sort();
            let median = ds[(ds.len() - 1) / 2];
            candidates.push(pts.iter().copied().filter(|&y| self.space.d(x0, y) <= median).collect());
        }
        candidates
            .par_iter()
            .map(|b| self.cut_norm(|y| b.contains(&y), |x| self.space.set_distance(b, &[x]) > r))
            .reduce(|| 0.0, f64::max)
    }

    /// Column sets `A` of the closed separated pairs `(B, A)`, as bitmasks
    /// over the distinct column points.
    ///
    /// Only pairs closed under `B ↦ A(B) ↦ B(A(B))` are kept: the closed
    /// pair dominates the original by monotonicity of cut-down norms.
    fn closed_cuts(&self, r: Dist, limit: usize) -> Result<(Vec<usize>, Vec<u64>)> {
        let rows = Self::distinct(&self.row_pts);
        let cols = Self::distinct(&self.col_pts);
        if rows.len() > limit {
            return Err(Error::SizeLimit {
                what: "ql exact enumeration (target points)",
                size: rows.len(),
                limit,
            });
        }
        if cols.len() > 64 {
            return Err(Error::SizeLimit {
                what: "ql exact enumeration (source points)",
                size: cols.len(),
                limit: 64,
            });
        }
        let full_cols: u64 = if cols.len() == 64 { u64::MAX } else { (1u64 << cols.len()) - 1 };
        // near[i]: columns within r of row point i
        let near: Vec<u64> = rows
            .iter()
            .map(|&y| {
                cols.iter()
                    .enumerate()
                    .filter(|&(_, &x)| self.space.d(x, y) <= r)
                    .fold(0u64, |acc, (j, _)| acc | (1 << j))
            })
            .collect();
        let k = rows.len();
        let mut union = vec![0u64; 1usize << k];
        let mut seps: Vec<u64> = Vec::with_capacity(1usize << k);
        for mask in 1usize..(1 << k) {
            let low = mask.trailing_zeros() as usize;
            union[mask] = union[mask & (mask - 1)] | near[low];
            let a = full_cols & !union[mask];
            if a != 0 {
                seps.push(a);
            }
        }
        drop(union);
        seps.sort_unstable();
        seps.dedup();
        Ok((cols, seps))
    }

    /// `‖χ_B T χ_A‖` for the closed pair with column set `a`.
    fn closed_cut_norm(&self, cols: &[usize], a: u64, r: Dist) -> f64 {
        let a_pts: Vec<usize> = (0..cols.len()).filter(|&j| a >> j & 1 == 1).map(|j| cols[j]).collect();
        let rows = Self::distinct(&self.row_pts);
        let b_closed: Vec<usize> = rows
            .into_iter()
            .filter(|&y| a_pts.iter().all(|&x| self.space.d(x, y) > r))
            .collect();
        self.cut_norm(
            |y| b_closed.binary_search(&y).is_ok(),
            |x| a >> cols.binary_search(&x).expect("column point") & 1 == 1,
        )
    }

    /// Exhaustive `ql` over all subsets of the row points.
    pub fn ql_exact(&self, r: Dist, limit: usize) -> Result<f64> {
        if self.is_zero() {
            return Ok(0.0);
        }
        let (cols, seps) = self.closed_cuts(r, limit)?;
        Ok(seps
            .par_iter()
            .map(|&a| self.closed_cut_norm(&cols, a, r))
            .reduce(|| 0.0, f64::max))
    }

    /// Whether `ql(r) > level`, stopping at the first separated pair that
    /// exceeds it. Cheap bounds are tried before enumerating.
    pub fn ql_exceeds(&self, r: Dist, level: f64, limit: usize) -> Result<bool> {
        if self.is_zero() {
            return Ok(0.0 > level);
        }
        if self.ql_lower(r) > level {
            return Ok(true);
        }
        if self.gt_norm(r) <= level {
            return Ok(false);
        }
        let (cols, seps) = self.closed_cuts(r, limit)?;
        Ok(seps.par_iter().any(|&a| self.closed_cut_norm(&cols, a, r) > level))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QlMode {
    Exact,
    Bounds,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QlValue {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub exactness: Exactness,
}

pub fn ql_value(t: &ModuleOperator, r: Dist, mode: QlMode) -> Result<QlValue> {
    t.require_same_space()?;
    let pm = PointMatrix::from_operator(t);
    let upper = pm.gt_norm(r);
    match mode {
        QlMode::Exact => {
            let n = t.target().space().len();
            if n > QL_EXACT_LIMIT {
                return Err(Error::SizeLimit {
                    what: "ql exact enumeration (target points)",
                    size: n,
                    limit: QL_EXACT_LIMIT,
                });
            }
            let v = pm.ql_exact(r, QL_EXACT_LIMIT)?;
            Ok(QlValue {
                value: v,
                lower: v,
                upper,
                exactness: Exactness::Exact,
            })
        }
        QlMode::Bounds => {
            let lower = pm.ql_lower(r);
            Ok(QlValue {
                value: lower,
                lower,
                upper,
                exactness: if lower == upper {
                    Exactness::Exact
                } else {
                    Exactness::LowerBound
                },
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AppOptions {
    pub iters: usize,
    pub tol: f64,
}

impl Default for AppOptions {
    fn default() -> Self {
        AppOptions {
            iters: 300,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AppValue {
    pub value: f64,
    /// `ql(T, r)`, exact when the target has at most [`QL_EXACT_LIMIT`] points.
    pub lower: f64,
    /// `‖T_{>r}‖`.
    pub upper: f64,
    pub converged: bool,
    pub iterations: usize,
    /// An operator of propagation `<= r` with `‖T − S‖ = value`.
    pub certificate: ModuleOperator,
}

impl AppValue {
    pub fn exactness(&self) -> Exactness {
        if self.converged {
            Exactness::Exact
        } else {
            Exactness::UpperBound
        }
    }
}

pub(crate) struct PmApp {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub converged: bool,
    pub iterations: usize,
    pub s: CMatrix,
}

/// `app` on a compressed operator. The lower bound is exact `ql` when the
/// row points fit under the enumeration limit.
pub(crate) fn pm_app(pm: &PointMatrix, r: Dist, opts: AppOptions) -> PmApp {
    let lower = pm
        .ql_exact(r, QL_EXACT_LIMIT)
        .unwrap_or_else(|_| pm.ql_lower(r));
    pm_app_from(pm, r, opts, lower)
}

/// `app` with a caller-supplied lower bound on it.
pub(crate) fn pm_app_from(pm: &PointMatrix, r: Dist, opts: AppOptions, lower: f64) -> PmApp {
    let (le, gt) = pm.truncations(r);
    let upper = if pm.is_zero() { 0.0 } else { norm(&gt) };
    if upper - lower <= opts.tol {
        return PmApp {
            value: upper,
            lower,
            upper,
            converged: true,
            iterations: 0,
            s: le,
        };
    }
    let band = band_nearness(
        &pm.m,
        &pm.pattern(r),
        BandOptions {
            iters: opts.iters,
            tol: opts.tol,
            lower: Some(lower),
        },
    )
    .expect("pattern matches the matrix");
    PmApp {
        value: band.dist,
        lower,
        upper,
        converged: band.converged,
        iterations: band.iterations,
        s: band.s,
    }
}

pub fn app_value(t: &ModuleOperator, r: Dist, opts: AppOptions) -> Result<AppValue> {
    t.require_same_space()?;
    let full_rows = t.matrix().nonzero_rows();
    let full_cols = t.matrix().nonzero_cols();
    let pm = PointMatrix::from_operator(t);
    let res = pm_app(&pm, r, opts);
    let mut s = CMatrix::zeros(t.matrix().rows(), t.matrix().cols());
    for (i, &fi) in full_rows.iter().enumerate() {
        for (j, &fj) in full_cols.iter().enumerate() {
            s[(fi, fj)] = res.s[(i, j)];
        }
    }
    Ok(AppValue {
        value: res.value,
        lower: res.lower,
        upper: res.upper,
        converged: res.converged,
        iterations: res.iterations,
        certificate: ModuleOperator::new(s, t.source().clone(), t.target().clone())?,
    })
}

pub fn ql_profile(t: &ModuleOperator, radii: &[Dist], mode: QlMode) -> Result<Profile> {
    let mut p = Profile::new(ProfileKind::Ql);
    for &r in radii {
        let q = ql_value(t, r, mode)?;
        p.push(ProfileSample {
            radius: r,
            value: Dist::new(q.value),
            exactness: q.exactness,
            bound: (q.exactness != Exactness::Exact).then(|| Dist::new(q.upper)),
        });
    }
    Ok(p)
}

pub fn app_profile(t: &ModuleOperator, radii: &[Dist], opts: AppOptions) -> Result<Profile> {
    let mut p = Profile::new(ProfileKind::App);
    for &r in radii {
        let a = app_value(t, r, opts)?;
        p.push(ProfileSample {
            radius: r,
            value: Dist::new(a.value),
            exactness: a.exactness(),
            bound: (!a.converged).then(|| Dist::new(a.lower)),
        });
    }
    Ok(p)
}
