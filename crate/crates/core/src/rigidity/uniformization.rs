//! Empirical uniformization radius `R(ε, r)` of `Ad(U)`.
//!
//! For each sampled contraction `t` of propagation `<= r`, `R(ε, r)` is the
//! least radius `R` with `app(U t U^*, R) <= ε‖t‖`. The sample set holds the
//! matrix units between basis vectors over `r`-close points, plus Gaussian
//! operators masked to propagation `<= r`.

use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dist::Dist;
use crate::error::{Error, Result};
use crate::gen;
use crate::linalg::{norm, CMatrix};
use crate::locality::{pm_app_from, AppOptions, PointMatrix, QL_EXACT_LIMIT};
use crate::module::{GeometricModule, ModuleOperator};
use crate::profile::{Exactness, Profile, ProfileKind, ProfileSample};
use crate::space::ExtMetricSpace;

#[derive(Debug, Clone)]
pub struct ProbeOptions {
    pub eps: f64,
    pub radii: Vec<Dist>,
    /// Number of Gaussian samples per radius.
    pub samples: usize,
    pub seed: u64,
    pub app: AppOptions,
    /// Largest compressed dimension on which the band solver is run.
    pub solver_dim_limit: usize,
}

impl ProbeOptions {
    pub fn new(eps: f64, radii: Vec<Dist>, samples: usize, seed: u64) -> Self {
        ProbeOptions {
            eps,
            radii,
            samples,
            seed,
            app: AppOptions {
                iters: 200,
                tol: 1e-9,
            },
            solver_dim_limit: 48,
        }
    }
}

/// `[lo, hi]` bracket of `R(ε)` for one sample on the grid.
fn bracket(pm: &PointMatrix, level: f64, grid: &[Dist], opts: &ProbeOptions) -> (Dist, Dist) {
    if pm.is_zero() {
        return (Dist::ZERO, Dist::ZERO);
    }
    // ql is nonincreasing, so lo is the first radius where it drops to the level
    let ql_at_most = |r: Dist| match pm.ql_exceeds(r, level, QL_EXACT_LIMIT) {
        Ok(above) => !above,
        Err(_) => pm.ql_lower(r) <= level,
    };
    let mut lo = Dist::INF;
    let mut lo_idx = grid.len();
    for (i, &r) in grid.iter().enumerate() {
        if ql_at_most(r) {
            lo = r;
            lo_idx = i;
            break;
        }
    }
    let mut hi = Dist::INF;
    let mut hi_idx = grid.len();
    for (i, &r) in grid.iter().enumerate().skip(lo_idx) {
        if pm.gt_norm(r) <= level {
            hi = r;
            hi_idx = i;
            break;
        }
    }
    let small = pm.m.rows().min(pm.m.cols()) <= opts.solver_dim_limit;
    if small {
        for &r in grid.iter().take(hi_idx).skip(lo_idx) {
            let a = pm_app_from(pm, r, opts.app, pm.ql_lower(r));
            if a.value <= level {
                hi = r;
                break;
            }
            if a.converged && a.value > level + opts.app.tol {
                // app(r) is pinned above the level
                lo = grid.iter().copied().find(|&g| g > r).unwrap_or(Dist::INF);
            }
        }
    }
    (lo.min(hi), hi)
}

/// Sparse `(point, value)` list of a vector's nonzero entries.
fn sparse(v: &[C64], points: &[usize]) -> Vec<(usize, C64)> {
    v.iter()
        .zip(points)
        .filter(|(z, _)| **z != C64::new(0.0, 0.0))
        .map(|(&z, &p)| (p, z))
        .collect()
}

pub fn uniformization_probe(u: &ModuleOperator, opts: &ProbeOptions) -> Result<Profile> {
    if !(opts.eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {}", opts.eps)));
    }
    let src = u.source().clone();
    let tgt = u.target().clone();
    let xs = src.space().clone();
    let ys: Arc<ExtMetricSpace> = tgt.space().clone();
    let mut grid: Vec<Dist> = ys.realized_distances().to_vec();
    if grid.is_empty() {
        grid.push(Dist::ZERO);
    }
    let src_points = src.coord_points();
    let tgt_points = tgt.coord_points();
    let mat = u.matrix();
    let columns: Vec<Vec<(usize, C64)>> = (0..mat.cols()).map(|j| sparse(&mat.column(j), &tgt_points)).collect();

    let mut profile = Profile::new(ProfileKind::Uniformization);
    for (ri, &r) in opts.radii.iter().enumerate() {
        let mut worst = (Dist::ZERO, Dist::ZERO);
        let mut absorb = |b: (Dist, Dist)| {
            worst = (worst.0.max(b.0), worst.1.max(b.1));
        };
        // matrix units e_{w,v}: Ad(U) sends them to e_{Uw,Uv}, of norm 1
        for (i, &xi) in src_points.iter().enumerate() {
            for (j, &xj) in src_points.iter().enumerate() {
                if xs.d(xi, xj) > r {
                    continue;
                }
                let pm = PointMatrix::outer(&columns[i], &columns[j], ys.clone());
                absorb(bracket(&pm, opts.eps, &grid, opts));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(ri as u64);
        for _ in 0..opts.samples {
            let t = CMatrix::from_fn(src.dim(), src.dim(), |i, j| {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                if xs.d(src_points[i], src_points[j]) <= r {
                    C64::new(re, im)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            let tn = norm(&t);
            if tn == 0.0 {
                continue;
            }
            let t = t.scale(C64::new(1.0 / tn, 0.0));
            let ut = mat.matmul(&t)?;
            let ad = mat.matmul(&ut.adjoint())?.adjoint();
            let pm = PointMatrix::compress(&ad, &tgt_points, &tgt_points, ys.clone());
            absorb(bracket(&pm, opts.eps, &grid, opts));
        }
        let (lo, hi) = worst;
        profile.push(ProfileSample {
            radius: r,
            value: hi,
            exactness: if lo == hi {
                Exactness::Exact
            } else {
                Exactness::UpperBound
            },
            bound: (lo != hi).then_some(lo),
        });
    }
    Ok(profile)
}

/// The fiber shift on a cycle of length `len` with `n` fibers per point:
/// `δ_{k,j} ↦ δ_{k+j mod len, j}`.
pub fn fiber_shift(len: usize, n: usize) -> Result<ModuleOperator> {
    let space = Arc::new(gen::cycle(len)?);
    let m = Arc::new(GeometricModule::uniform(space, n));
    let mut mat = CMatrix::zeros(m.dim(), m.dim());
    for k in 0..len {
        for j in 0..n {
            mat[(m.offset((k + j) % len) + j, m.offset(k) + j)] = C64::new(1.0, 0.0);
        }
    }
    ModuleOperator::new(mat, m.clone(), m)
}
